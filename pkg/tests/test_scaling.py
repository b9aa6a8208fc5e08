"""
Running-time growth of the well-formedness check
"""

import time

import pytest

from src.services.graph_analysis import check_well_formed
from src.services.weight_analysis import weight_report


def best_time(func, arg, repeats=3):
    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        func(arg)
        timings.append(time.perf_counter() - start)
    return min(timings)


@pytest.mark.slow
@pytest.mark.parametrize("func", [check_well_formed, weight_report])
def test_time_grows_linearly_with_size(svt_chain, func):
    small, large = svt_chain(250), svt_chain(2500)
    func(small)
    t_small = max(best_time(func, small), 1e-3)
    t_large = best_time(func, large)
    assert t_large / t_small <= 12
