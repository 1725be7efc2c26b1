"""
sampling_pool.py

In-process queue and worker threads that evaluate Monte Carlo chunks.

Usage:
 - build a ``ChunkQueue(num_workers)``
 - ``enqueue(job)`` once per chunk; a job is a dict
       {'index': int, 'fn': callable, 'args': tuple}
 - ``run()`` starts the workers, waits for the queue to drain and returns the
   results ordered by chunk index

Chunk boundaries are chosen by the caller and never depend on the number of
workers, so results are bit-identical for any worker count. numpy releases the
GIL inside its linear algebra kernels, which is where the time goes.
"""

import logging
import threading
import uuid
from queue import Empty, Queue
from typing import Any, Callable, Dict, List, Sequence, Tuple

logger = logging.getLogger(__name__)


class ChunkQueue:
    def __init__(self, num_workers: int = 1):
        self.num_workers = max(1, int(num_workers))
        self._queue: Queue = Queue()
        self._results: Dict[int, Any] = {}
        self._errors: List[Tuple[int, BaseException]] = []
        self._lock = threading.Lock()

    def enqueue(self, job: Dict) -> Dict:
        """Queue a job and return {'job_id': str, 'position': int}."""
        job_id = str(uuid.uuid4())
        job_with_id = dict(job)
        job_with_id["job_id"] = job_id
        self._queue.put(job_with_id)
        return {"job_id": job_id, "position": self._queue.qsize()}

    def _process_job(self, job: Dict):
        try:
            result = job["fn"](*job.get("args", ()))
        except Exception as exc:
            logger.exception("Error processing chunk %s", job.get("index"))
            with self._lock:
                self._errors.append((job["index"], exc))
            return
        with self._lock:
            self._results[job["index"]] = result

    def _worker_loop(self, stop_event: threading.Event):
        logger.debug("Worker started")
        while not stop_event.is_set():
            try:
                job = self._queue.get(timeout=0.1)
            except Empty:
                continue
            try:
                self._process_job(job)
            finally:
                self._queue.task_done()
        logger.debug("Worker stopped")

    def run(self) -> List[Any]:
        expected = self._queue.qsize()
        if self.num_workers == 1:
            # no threads needed; same per-chunk code path
            while not self._queue.empty():
                job = self._queue.get()
                self._process_job(job)
                self._queue.task_done()
        else:
            stop_event = threading.Event()
            threads = [
                threading.Thread(target=self._worker_loop, args=(stop_event,), daemon=True)
                for _ in range(self.num_workers)
            ]
            for t in threads:
                t.start()
            logger.debug("Started %d background worker(s)", self.num_workers)
            self._queue.join()
            stop_event.set()
            for t in threads:
                t.join()
        if self._errors:
            # every chunk has run; the lowest failing index wins
            raise min(self._errors, key=lambda item: item[0])[1]
        if len(self._results) != expected:
            raise RuntimeError(f"{expected} chunks queued, {len(self._results)} completed")
        return [self._results[i] for i in sorted(self._results)]


def map_chunks(fn: Callable, chunks: Sequence[tuple], num_workers: int = 1) -> List[Any]:
    """Apply ``fn(*chunk)`` to every chunk, results in chunk order."""
    pool = ChunkQueue(num_workers)
    for i, args in enumerate(chunks):
        pool.enqueue({"index": i, "fn": fn, "args": tuple(args)})
    return pool.run()


__all__ = ["ChunkQueue", "map_chunks"]
