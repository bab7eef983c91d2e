"""Shared fixtures: solved surfaces are expensive, so build them once."""
from __future__ import annotations

import time
from types import SimpleNamespace

import pytest

from fractsurf.config import parse_config_document
from fractsurf.fixtures import fixture_config
from fractsurf.ifs import solve_fixed_point
from fractsurf.pipeline import build_system


def job_for(name: str):
    return build_system(parse_config_document(fixture_config(name)))


@pytest.fixture(scope="session")
def example2a_job():
    return job_for("example2a")


@pytest.fixture(scope="session")
def example2a_solved(example2a_job):
    """The example2a surface at its configured resolution, with solve timing."""
    cfg = example2a_job.config.solver
    t0 = time.perf_counter()
    surface = solve_fixed_point(example2a_job.system, cfg.resolution,
                                tol=cfg.tol, max_iter=cfg.max_iter)
    seconds = time.perf_counter() - t0
    return SimpleNamespace(surface=surface, seconds=seconds)


@pytest.fixture(scope="session")
def example2b_job():
    return job_for("example2b-sin")


@pytest.fixture(scope="session")
def example2b_solved(example2b_job):
    cfg = example2b_job.config.solver
    surface = solve_fixed_point(example2b_job.system, cfg.resolution,
                                tol=cfg.tol, max_iter=cfg.max_iter)
    return SimpleNamespace(surface=surface)


@pytest.fixture(scope="session")
def flat_job():
    return job_for("flat2x2")


@pytest.fixture(scope="session")
def bilinear_job():
    return job_for("bilinear2x2")


@pytest.fixture(scope="session")
def band_job():
    return job_for("band2x2")
