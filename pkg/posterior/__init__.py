from .curves import QUANTILE_COLUMNS, curve_table, epidemic_curves, posterior_grid
from .export import write_curves, write_network_posterior, write_summary
from .network import TNDistribution, from_networks, network_posterior
from .samples import SPILL_FILE, ChainSamples, chain_directory, chains_of, load_chain, load_chains, write_chain
from .summary import SUMMARY_COLUMNS, pooled_parameters, retained_indices, summarize

__all__ = [
    "QUANTILE_COLUMNS",
    "SPILL_FILE",
    "SUMMARY_COLUMNS",
    "ChainSamples",
    "TNDistribution",
    "chain_directory",
    "chains_of",
    "curve_table",
    "epidemic_curves",
    "from_networks",
    "load_chain",
    "load_chains",
    "network_posterior",
    "pooled_parameters",
    "posterior_grid",
    "retained_indices",
    "summarize",
    "write_chain",
    "write_curves",
    "write_network_posterior",
    "write_summary",
]
