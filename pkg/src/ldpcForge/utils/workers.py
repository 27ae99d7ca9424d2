"""StreamWorker - run a producer in a background thread and feed a shared queue.

Several workers can share one queue; each one ends its stream with a
WorkerDone marker so the consumer knows when every producer has finished.
Exceptions raised by a producer are forwarded through the queue and re-raised
on the consumer side.
"""

import logging
import queue
import threading
from typing import Any, Callable, Iterable, Iterator, List, Optional

PUT_TIMEOUT = 0.05


class WorkerDone:
    """End-of-stream marker; carries the producer's exception, if any."""

    def __init__(self, name: str, error: Optional[BaseException] = None):
        self.name = name
        self.error = error


class StreamWorker:
    """A daemon thread that drains an iterable into a queue.

    This class provides functionality to:
    - Start a producer without blocking the caller
    - Stop it early through a shared stop event
    - Report completion or failure through the queue
    """

    def __init__(self, name: str, producer: Callable[[], Iterable[Any]], out: queue.Queue,
                 stop_event: Optional[threading.Event] = None):
        """Initialize the StreamWorker.

        Args:
            name: Name used for the thread and in log messages
            producer: Zero-argument callable returning the items to emit
            out: Queue receiving the items, then a WorkerDone marker
            stop_event: Optional event; once set the worker stops emitting
        """
        self.name = name
        self.producer = producer
        self.out = out
        self.stop_event = stop_event or threading.Event()
        self._thread: Optional[threading.Thread] = None
        self.emitted = 0

    def _run(self) -> None:
        error = None
        try:
            for item in self.producer():
                if not self._put(item):
                    break
                self.emitted += 1
        except Exception as e:
            logging.error(f"[worker {self.name}] failed after {self.emitted} items: {str(e)}")
            error = e
        finally:
            marker = WorkerDone(self.name, error)
            if not self._put(marker):
                try:
                    self.out.put_nowait(marker)
                except queue.Full:
                    pass

    def _put(self, item: Any) -> bool:
        """Block on a full queue only while the worker has not been asked to stop."""
        while not self.stop_event.is_set():
            try:
                self.out.put(item, timeout=PUT_TIMEOUT)
                return True
            except queue.Full:
                continue
        return False

    def start(self) -> None:
        """Start the producer thread.

        Raises:
            ValueError: If the worker is already running
        """
        if self._thread is not None:
            raise ValueError(f"worker {self.name} is already running")
        self._thread = threading.Thread(target=self._run, name=self.name, daemon=True)
        self._thread.start()

    def is_running(self) -> bool:
        return self._thread is not None and self._thread.is_alive()

    def stop(self, timeout: float = 5.0) -> None:
        """Ask the producer to stop and wait for its thread."""
        self.stop_event.set()
        if self._thread is not None:
            self._thread.join(timeout=timeout)
            if self._thread.is_alive():
                logging.warning(f"[worker {self.name}] did not stop within {timeout}s")


def drain(workers: List[StreamWorker], out: queue.Queue) -> Iterator[Any]:
    """Yield items from the shared queue until every worker has reported done.

    Raises:
        The first exception forwarded by a worker, after stopping the others.
    """
    pending = len(workers)
    while pending:
        item = out.get()
        if isinstance(item, WorkerDone):
            pending -= 1
            if item.error is not None:
                for worker in workers:
                    worker.stop_event.set()
                raise item.error
            continue
        yield item
