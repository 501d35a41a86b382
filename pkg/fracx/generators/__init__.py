from .assortment import AssortmentGenerator, capacity, gen_assortment
from .base import BaseGenerator
from .bilinear import BilinearGenerator, gen_bilinear, series_parallel_edges, subset_sum_gadget
from .rng import PRNG_NAME, make_rng
from .uniform import UniformGenerator, gen_uniform
from .univariate import UnivariateGenerator, gen_univariate, gradient

GENERATORS: dict[str, BaseGenerator] = {
    g.name: g
    for g in (UniformGenerator(), AssortmentGenerator(), UnivariateGenerator(), BilinearGenerator())
}

__all__ = [
    "AssortmentGenerator",
    "BaseGenerator",
    "BilinearGenerator",
    "GENERATORS",
    "PRNG_NAME",
    "UniformGenerator",
    "UnivariateGenerator",
    "capacity",
    "gen_assortment",
    "gen_bilinear",
    "gen_uniform",
    "gen_univariate",
    "gradient",
    "make_rng",
    "series_parallel_edges",
    "subset_sum_gadget",
]
