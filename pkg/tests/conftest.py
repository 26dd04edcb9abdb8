import numpy as np
import pytest

from somchange import Som, SomGrid, WeightedPattern
from somchange.change import ChangeSummary, FeatureChangeDetail, RegionSelection
from somchange.glyphs import scale_pemd_for_display

# RGB cube toy map: 3x3 grid whose prototypes sit on handy cube corners
# (plus one half-step point), giving exact distances for structure tests.
RGB_PROTOTYPES = np.array(
    [
        [0.0, 1.0, 0.0],  # 0 green
        [1.0, 1.0, 0.0],  # 1 yellow
        [1.0, 0.0, 0.0],  # 2 red
        [0.0, 1.0, 1.0],  # 3 cyan
        [0.0, 0.0, 0.0],  # 4 black
        [0.5, 0.0, 0.5],  # 5 half red+blue
        [0.0, 0.0, 1.0],  # 6 blue
        [1.0, 0.0, 1.0],  # 7 magenta
        [1.0, 1.0, 1.0],  # 8 white
    ]
)


@pytest.fixture(scope="session")
def rgb_som() -> Som:
    return Som(
        grid=SomGrid(topology="rectangular", width=3, height=3),
        prototypes=RGB_PROTOTYPES,
        bandwidth=0.5,
    )


def delta_pattern(som: Som, index: int) -> WeightedPattern:
    w = np.zeros(som.n)
    w[index] = 1.0
    return WeightedPattern(som=som, weights=w)


def mixed_pattern(som: Som, masses: dict) -> WeightedPattern:
    w = np.zeros(som.n)
    for idx, mass in masses.items():
        w[idx] = mass
    return WeightedPattern(som=som, weights=w)


def random_pattern(som: Som, rng: np.random.Generator, sparsity: float = 0.0) -> WeightedPattern:
    w = rng.random(som.n)
    if sparsity > 0:
        w[rng.random(som.n) < sparsity] = 0.0
    if w.sum() == 0:
        w[int(rng.integers(som.n))] = 1.0
    return WeightedPattern(som=som, weights=w / w.sum())


def random_som(rng: np.random.Generator, n_max: int = 3, m: int = 2) -> Som:
    width = int(rng.integers(1, n_max + 1))
    grid = SomGrid(topology="rectangular", width=width, height=1)
    protos = rng.normal(size=(grid.n, m))
    return Som(grid=grid, prototypes=protos, bandwidth=1.0)


def make_detail(
    name="f0",
    pemd=0.0,
    scaled=0.1,
    direction="none",
    significant=False,
    ref=50.0,
    chg=50.0,
    rng_z=2.0,
) -> FeatureChangeDetail:
    return FeatureChangeDetail(
        name=name,
        pemd=pemd,
        scaled_pemd=scaled,
        direction=direction,
        significant=significant,
        ks_statistic=0.0,
        ref_value=ref,
        chg_value=chg,
        ref_range=(ref - 2.0, ref + 2.0),
        chg_range=(chg - 2.0, chg + 2.0),
        feature_range_z=rng_z,
        t_lo=40.0,
        t_hi=60.0,
    )


def random_summary(rng: np.random.Generator) -> ChangeSummary:
    """Structurally valid ChangeSummary with randomized content."""
    m = int(rng.integers(2, 7))
    details = []
    for k in range(m):
        rng_z = float(rng.uniform(0.0, 3.0))
        p = float(rng.normal() * rng_z * 0.5)
        if abs(p) <= 1e-9:
            direction = "none"
        else:
            direction = "increase" if p > 0 else "decrease"
        details.append(
            make_detail(
                name=f"f{k}",
                pemd=p,
                scaled=scale_pemd_for_display(p, rng_z),
                direction=direction,
                significant=bool(rng.integers(2)),
                ref=float(rng.uniform(40, 60)),
                chg=float(rng.uniform(40, 60)),
                rng_z=rng_z,
            )
        )
    mean_p = float(np.mean([d.pemd for d in details]))
    overall = "none" if abs(mean_p) <= 1e-9 else ("increase" if mean_p > 0 else "decrease")
    return ChangeSummary(
        scaled_emd=float(rng.uniform(0, 1)),
        mean_pemd=mean_p,
        overall_direction=overall,
        details=tuple(details),
        region_ref=RegionSelection(indices=(0,)),
        region_chg=RegionSelection(indices=(0,)),
        alpha=0.05,
    )


# ---------------------------------------------------------------------------
# Acceptance reporting: one PASS/FAIL line per criterion at the end of a run.

_ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE_RESULTS.append((name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in _ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}")
