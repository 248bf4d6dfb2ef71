import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from contact_surgery.diagram import SurgeryComponent, SurgeryDiagram

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def components(draw, cid="c0", sign=None):
    tb = draw(st.integers(-6, 2))
    rot = draw(st.integers(-5, 5).filter(lambda r: (tb + r) % 2))
    s = draw(st.sampled_from((1, -1))) if sign is None else sign
    return SurgeryComponent(cid, tb, rot, s)


@st.composite
def diagrams(draw, min_size=0, max_size=5, lk_max=3):
    n = draw(st.integers(min_size, max_size))
    ids = [f"c{k}" for k in range(n)]
    comps = [draw(components(cid)) for cid in ids]
    lk = {}
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            lk[(a, b)] = draw(st.integers(-lk_max, lk_max))
    return SurgeryDiagram.build(comps, lk)


@st.composite
def symmetric_matrices(draw, max_n=4, lo=-3, hi=3):
    n = draw(st.integers(1, max_n))
    q = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            q[i][j] = q[j][i] = draw(st.integers(lo, hi))
    return q
