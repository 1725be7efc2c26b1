import time

import pytest

from sampling_pool import ChunkQueue, map_chunks


def _square(x):
    return x * x


def _slow_identity(x, delay):
    time.sleep(delay)
    return x


def test_enqueue_returns_id_and_position():
    q = ChunkQueue()
    first = q.enqueue({"index": 0, "fn": _square, "args": (2,)})
    second = q.enqueue({"index": 1, "fn": _square, "args": (3,)})
    assert set(first) == {"job_id", "position"}
    assert first["job_id"] != second["job_id"]
    assert second["position"] == 2
    assert q.run() == [4, 9]


@pytest.mark.parametrize("workers", [1, 4])
def test_results_come_back_in_chunk_order(workers):
    # later chunks finish first
    chunks = [(i, 0.02 * (5 - i)) for i in range(5)]
    assert map_chunks(_slow_identity, chunks, workers) == [0, 1, 2, 3, 4]


def test_worker_count_is_at_least_one():
    assert ChunkQueue(0).num_workers == 1
    assert map_chunks(_square, [(n,) for n in range(10)], 0) == [n * n for n in range(10)]


def test_empty_queue():
    assert map_chunks(_square, [], 3) == []


@pytest.mark.parametrize("workers", [1, 3])
def test_chunk_error_is_raised(workers):
    def boom(x):
        if x == 2:
            raise ZeroDivisionError("chunk 2 failed")
        return x

    with pytest.raises(ZeroDivisionError):
        map_chunks(boom, [(n,) for n in range(4)], workers)


@pytest.mark.parametrize("workers", [1, 4])
def test_lowest_failing_chunk_is_reported(workers):
    # with threads, chunk 3 fails well before chunk 1
    def run(x, delay):
        time.sleep(delay)
        if x in (1, 3):
            raise ValueError(f"chunk {x}")
        return x

    chunks = [(0, 0.0), (1, 0.15), (2, 0.0), (3, 0.0)]
    with pytest.raises(ValueError, match="chunk 1"):
        map_chunks(run, chunks, workers)
