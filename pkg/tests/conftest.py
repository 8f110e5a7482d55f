"""Shared contexts for the serre_lab test suite."""

import pytest
from hypothesis import settings

from serre_lab.lattice import AlcoveGeometry, RootCtx
from serre_lab.modreps import ModularReps
from serre_lab.weightsets import SerreWeightPredictor

settings.register_profile("serre-lab", deadline=None, max_examples=50)
settings.load_profile("serre-lab")


@pytest.fixture
def gl3_p5() -> RootCtx:
    return RootCtx(3, 5)


@pytest.fixture
def gl2_p5() -> RootCtx:
    return RootCtx(2, 5)


@pytest.fixture
def geometry_gl3(gl3_p5) -> AlcoveGeometry:
    return AlcoveGeometry(gl3_p5)


@pytest.fixture
def modreps_gl3(gl3_p5) -> ModularReps:
    return ModularReps(gl3_p5)


@pytest.fixture
def predictor_gl3(gl3_p5) -> SerreWeightPredictor:
    return SerreWeightPredictor(gl3_p5)
