"""依次运行 SIR 示例的 simulate -> fit -> summarize -> curves。"""

from __future__ import annotations

import argparse
from pathlib import Path
import sys

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from main import main as run  # noqa: E402

CONFIG = ROOT / "configs" / "sir_simulated.toml"


def main() -> None:
    parser = argparse.ArgumentParser(description="复现 SIR 模拟示例")
    parser.add_argument("--output-dir", default=str(ROOT / "output" / "sir_simulated"))
    parser.add_argument("--iterations", default=None, help="覆盖迭代次数，冒烟测试时可设小")
    parser.add_argument("--burnin", type=int, default=None)
    parser.add_argument("--thin", type=int, default=None)
    args = parser.parse_args()

    output = Path(args.output_dir)
    simulated = output / "simulated"
    fitted = output / "fit"
    steps = [
        ["simulate", str(CONFIG), "--output-dir", str(simulated)],
        [
            "fit",
            str(CONFIG),
            "--output-dir",
            str(fitted),
            "--observations",
            str(simulated / "observations.csv"),
        ],
        ["summarize", str(fitted)],
        ["curves", str(fitted)],
    ]
    if args.iterations is not None:
        steps[1].extend(["--iterations", str(args.iterations)])
    for step in steps[2:]:
        if args.burnin is not None:
            step.extend(["--burnin", str(args.burnin)])
        if args.thin is not None:
            step.extend(["--thin", str(args.thin)])
    for step in steps:
        code = run(step)
        if code != 0:
            raise SystemExit(code)
    print(f"sir_example=ok output={output}")


if __name__ == "__main__":
    main()
