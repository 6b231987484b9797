"""Hypothesis strategies and profiles."""

import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ..regexp import (
    EMPTY,
    EPSILON,
    WILDCARD,
    Alt,
    Cat,
    Sym,
    Diff,
    Star,
    Range,
    NotSym,
    NotRange,
)
from ..frontend import (
    SAny,
    SAlt,
    SCat,
    SOpt,
    SSet,
    SChar,
    SDiff,
    SPlus,
    SStar,
    SString,
)

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "acceptance",
    max_examples=10_000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ALPHABET = "abcd"
CODES = [ord(ch) for ch in ALPHABET]

codes = st.sampled_from(CODES)
words = st.text(alphabet=ALPHABET, max_size=12)
short_words = st.text(alphabet=ALPHABET, max_size=8)

leaves = st.one_of(
    st.just(EMPTY),
    st.just(EPSILON),
    st.just(WILDCARD),
    st.builds(Sym, codes),
    st.builds(NotSym, codes),
    st.builds(Range, codes, codes),
    st.builds(NotRange, codes, codes),
)


def _composites(children):
    return st.one_of(
        st.builds(Alt, children, children),
        st.builds(Cat, children, children),
        st.builds(Star, children),
        st.builds(Diff, children, children),
    )


regexps = st.recursive(leaves, _composites, max_leaves=8)

_set_items = st.lists(
    st.tuples(codes, st.one_of(st.none(), codes)), min_size=1, max_size=3
)

surface_leaves = st.one_of(
    st.builds(SChar, codes),
    st.builds(SString, st.text(alphabet=ALPHABET, max_size=2)),
    st.just(SAny()),
    st.builds(SSet, _set_items.map(tuple), st.booleans()),
)


def _surface_composites(children):
    return st.one_of(
        st.builds(SAlt, children, children),
        st.builds(SCat, children, children),
        st.builds(SDiff, children, children),
        st.builds(SStar, children),
        st.builds(SPlus, children),
        st.builds(SOpt, children),
    )


surface_regexps = st.recursive(
    surface_leaves, _surface_composites, max_leaves=6
)
