from __future__ import annotations

import pickle

import numpy as np
import pytest

from database import SampleRecord, SampleStore


def _record(chain, iteration, n=3):
    events = np.full((3, n), np.nan)
    events[1] = np.arange(n) + iteration
    network = np.full(n, -2, dtype=np.int64)
    network[1] = -1
    return SampleRecord(chain, iteration, events, network)


def test_samples_round_trip_through_sqlite(tmp_path):
    store = SampleStore(tmp_path / "samples.sqlite")
    store.register_chain(0, "SIR", 3)
    assert store.add_samples([_record(0, iteration) for iteration in range(5)]) == 5
    assert store.count_samples(0) == 5
    record = store.get_sample(0, 3)
    assert record.events[1].tolist() == [3.0, 4.0, 5.0]
    assert np.isnan(record.events[0]).all()
    assert record.network.tolist() == [-2, -1, -2]
    assert [item.iteration for item in store.iter_samples(0, [4, 1, 9])] == [4, 1]
    assert store.get_sample(0, 99) is None


def test_chain_metadata(tmp_path):
    store = SampleStore(tmp_path / "nested" / "samples.sqlite")
    store.register_chain(2, "SEIR", 7)
    info = store.get_chain(2)
    assert (info.chain, info.model_class, info.individuals) == (2, "SEIR", 7)
    assert store.get_chain(5) is None


def test_unregistered_chain_raises(tmp_path):
    store = SampleStore(tmp_path / "samples.sqlite")
    with pytest.raises(KeyError):
        store.get_sample(1, 0)


def test_rewriting_an_iteration_replaces_it(tmp_path):
    store = SampleStore(tmp_path / "samples.sqlite")
    store.register_chain(0, "SI", 3)
    store.add_samples([_record(0, 0)])
    store.add_samples([SampleRecord(0, 0, np.zeros((3, 3)), np.full(3, -2, dtype=np.int64))])
    assert store.count_samples(0) == 1
    assert store.get_sample(0, 0).events.sum() == 0.0


def test_store_reuses_one_connection(tmp_path):
    store = SampleStore(tmp_path / "samples.sqlite")
    store.register_chain(0, "SIR", 3)
    store.add_samples([_record(0, iteration) for iteration in range(3)])
    conn = store._connect()
    for iteration in range(3):
        store.get_sample(0, iteration)
    assert store._connect() is conn
    store.close()
    assert not store.is_open
    assert store.get_sample(0, 2).iteration == 2
    assert store.is_open


def test_pickled_store_reopens_lazily(tmp_path):
    with SampleStore(tmp_path / "samples.sqlite") as store:
        store.register_chain(1, "SI", 3)
        store.add_samples([_record(1, 0)])
        copy = pickle.loads(pickle.dumps(store))
    assert not store.is_open
    assert not copy.is_open
    assert copy.count_samples(1) == 1
    copy.close()
