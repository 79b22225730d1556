"""
This module is designed to assist with thread-related actions.
"""
# Built-in/Generic Imports
import threading
import sys
import queue
import logging
from typing import Any, Callable, List, Sequence

# Libraries
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name

# Exceptions
from fexception import FCustomException

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, thread_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "3.6"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class ParallelTaskFailure(Exception):
    """Exception raised when a worker thread fails outside the mapped function."""

    __module__ = "builtins"
    pass


def map_ordered(passing_program_function: Callable[[Any], Any], items: Sequence[Any], workers: int = 1) -> List[Any]:
    """
    Calls a function on every item with a pool of worker threads.

    Results come back in input order, so the output does not depend on the worker count.\\
    When calls raise, the exception of the lowest failing item index is re-raised unchanged\\
    after every worker has stopped. workers=1 runs inline on the calling thread.

    Args:
        passing_program_function (Callable):
        \t\\- The function called once per item.
        items (Sequence):
        \t\\- The items.
        workers (int, optional):
        \t\\- The worker thread count. Defaults to 1.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{workers}' is not an instance of the required class(es) or subclass(es).
        ParallelTaskFailure:
        \t\\- The worker count must be at least 1.
        ParallelTaskFailure:
        \t\\- A worker thread stopped without returning a result.

    Returns:
        List[Any]:
        \t\\- One result per item, in input order.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=workers, required_type=int, tb_remove_name="map_ordered")

    logger.debug(
        "Passing parameters:\n"
        f"  - passing_program_function (Callable):\n        - {getattr(passing_program_function, '__name__', passing_program_function)}\n"
        f"  - items (Sequence):\n        - {len(items)} items\n"
        f"  - workers (int):\n        - {workers}\n"
    )

    if workers < 1:
        exc_args = {
            "main_message": "The worker count must be at least 1.",
            "custom_type": ParallelTaskFailure,
            "expected_result": ">= 1",
            "returned_result": workers,
        }
        raise ParallelTaskFailure(FCustomException(message_args=exc_args, tb_remove_name="map_ordered"))

    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [passing_program_function(item) for item in items]

    results: List[Any] = [None] * len(items)
    done = [False] * len(items)
    # Holds (index, exc_info) for every failing call.
    bucket: "queue.Queue" = queue.Queue()
    work: "queue.Queue" = queue.Queue()
    for index in range(len(items)):
        work.put(index)

    class map_worker(threading.Thread):
        def __init__(self, number: int) -> None:
            threading.Thread.__init__(self)
            self.name = f"map_ordered_{number}"
            self.daemon = True

        def run(self) -> None:
            while True:
                try:
                    index = work.get(block=False)
                except queue.Empty:
                    return
                try:
                    results[index] = passing_program_function(items[index])
                    done[index] = True
                except Exception:
                    bucket.put((index, sys.exc_info()))

    threads = [map_worker(number) for number in range(min(workers, len(items)))]
    for thread_obj in threads:
        thread_obj.start()
    for thread_obj in threads:
        thread_obj.join()

    failures = []
    while not bucket.empty():
        failures.append(bucket.get(block=False))
    if failures:
        index, (exc_type, exc_obj, exc_trace) = min(failures, key=lambda failure: failure[0])
        logger.debug(f"Item {index} failed with {exc_type.__name__}. {len(failures)} item(s) failed in total.")
        raise exc_obj.with_traceback(exc_trace)

    if not all(done):
        exc_args = {
            "main_message": "A worker thread stopped without returning a result.",
            "custom_type": ParallelTaskFailure,
            "expected_result": f"{len(items)} results",
            "returned_result": f"{sum(done)} results",
        }
        raise ParallelTaskFailure(FCustomException(message_args=exc_args, tb_remove_name="map_ordered"))

    logger.debug(f"Returning value(s):\n  - Return = {len(results)} results")
    return results
