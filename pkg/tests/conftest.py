import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tacs.generate import GenConfig, TermGenerator

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def processes(draw, max_budget: int = 12):
    seed = draw(st.integers(0, 2**32 - 1))
    budget = draw(st.integers(1, max_budget))
    return TermGenerator(GenConfig(size_budget=budget), random.Random(seed)).process().term


@st.composite
def open_terms(draw, var: str = "y"):
    seed = draw(st.integers(0, 2**32 - 1))
    guarded = draw(st.booleans())
    return TermGenerator(GenConfig(size_budget=10), random.Random(seed)).open_term(var, guarded)
