from __future__ import annotations

import datetime as dt
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from frmp.fixture import koupa_mini_geojson
from frmp.network import build_graph, load_geojson
from frmp.store import Store

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_GEOJSON = REPO_ROOT / "fixtures" / "koupa_mini.geojson"
FIXTURE_META = REPO_ROOT / "fixtures" / "koupa_mini.meta.json"


class TickingClock:
    """Deterministic clock: every call advances by a fixed step."""

    def __init__(self, start: dt.datetime | None = None, step_s: float = 60.0):
        self.now = start or dt.datetime(2018, 3, 27, 9, 0, 0, tzinfo=dt.timezone.utc)
        self.step = dt.timedelta(seconds=step_s)

    def __call__(self) -> dt.datetime:
        current = self.now
        self.now = self.now + self.step
        return current


@pytest.fixture(scope="session")
def koupa_segments():
    return load_geojson(koupa_mini_geojson())


@pytest.fixture(scope="session")
def koupa_graph(koupa_segments):
    return build_graph(koupa_segments, snap_tolerance=1.0)


@pytest.fixture()
def clock():
    return TickingClock()


@pytest.fixture()
def koupa_store(tmp_path, koupa_segments):
    """A store preloaded with the authored network."""
    store = Store.open(tmp_path / "store.json")

    def mutate(draft):
        for seg in koupa_segments:
            draft.segments[seg.id] = seg

    store.commit(mutate)
    return store


@pytest.fixture()
def demo_reports_store(koupa_store, clock):
    """Koupa store carrying the two demo reports (Landslide/378, ClosedRoad/189)."""
    from frmp.reports import ReportService

    service = ReportService(koupa_store, clock)
    service.create_report(
        "Landslide", "Rocks are blocking the way", 378, reporter="cco1"
    )
    service.create_report(
        "ClosedRoad", "Due to heavy rain, the road flooded", 189, reporter="cco1"
    )
    return koupa_store
