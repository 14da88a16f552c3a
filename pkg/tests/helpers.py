"""Shared cached constructors so test modules reuse heavy computations."""

from functools import lru_cache

from capspec.cap import make_domain, make_grid
from capspec.eigen import find_eigenvalue, fourier_coefficient
from capspec.torsion import torsion_greens


@lru_cache(maxsize=None)
def dom_grid(N: int, eps: float):
    dom = make_domain(N, eps)
    return dom, make_grid(dom)


@lru_cache(maxsize=None)
def eigen_pair(N: int, eps: float, j: int):
    dom, grid = dom_grid(N, eps)
    return find_eigenvalue(dom, j, grid)


@lru_cache(maxsize=None)
def fourier(N: int, eps: float, j: int):
    dom, _ = dom_grid(N, eps)
    return fourier_coefficient(dom, eigen_pair(N, eps, j))


@lru_cache(maxsize=None)
def greens(N: int, eps: float):
    dom, grid = dom_grid(N, eps)
    return torsion_greens(dom, grid)
