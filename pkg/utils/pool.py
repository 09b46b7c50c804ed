from typing import Callable, Iterator, Sequence

import torch
import torch.multiprocessing as mp
from progrich import ProgressBar


def init_worker(seed: int):
    # Every worker runs single threaded, the parallelism is across the tasks.
    torch.set_num_threads(1)
    torch.manual_seed(seed)


def num_jobs(jobs: int) -> int:
    """
    Number of processes to use, where jobs <= 0 means all available CPUs.
    """
    return mp.cpu_count() if jobs <= 0 else jobs


def parallel_map[T, R](
    fn: Callable[[T], R],
    tasks: Sequence[T],
    jobs: int = 1,
    name: str = "Running",
    seed: int = 0,
) -> Iterator[R]:
    """
    Apply fn to all tasks, in a pool of `jobs` processes if there is more than one.
    The results are yielded in the order of the tasks, not of their completion, and
    an exception of a task is raised when its result is reached, after all results of
    the preceding tasks.

    The function and the tasks must be picklable when more than one job is used.
    """
    jobs = min(num_jobs(jobs), len(tasks))
    with ProgressBar(name, total=len(tasks), persist=True) as pbar:
        if jobs <= 1:
            for task in tasks:
                result = fn(task)
                pbar.advance()
                yield result
            return
        # Forking a process that already runs torch threads can deadlock.
        ctx = mp.get_context("spawn")
        with ctx.Pool(jobs, initializer=init_worker, initargs=(seed,)) as pool:
            for result in pool.imap(fn, tasks):
                pbar.advance()
                yield result
