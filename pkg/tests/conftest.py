from __future__ import annotations

import os
import signal

import pytest

from pymonocubic.cocycle import AnalysisContext
from pymonocubic.core.config import ENV_PREFIX, Config
from pymonocubic.core.logger import Logger
from pymonocubic.engine import GeneratorSet
from pymonocubic.ingest import GENERATORS_DIR
from pymonocubic.mordell import Model, MordellPoint


def _reset_singletons():
    Config.drop_instance()
    Logger._instance = None


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch, tmp_path):
    for key in list(os.environ):
        if key.startswith(ENV_PREFIX) or key == 'EXCEPTION_TRACE':
            monkeypatch.delenv(key)
    monkeypatch.chdir(tmp_path)
    _reset_singletons()
    sigint = signal.getsignal(signal.SIGINT)
    yield
    signal.signal(signal.SIGINT, sigint)
    # .env loading writes straight into os.environ
    for key in list(os.environ):
        if key.startswith(ENV_PREFIX):
            os.environ.pop(key)
    _reset_singletons()


@pytest.fixture
def logger() -> Logger:
    return Logger.get_instance(True, filename=None, verbose=False)


@pytest.fixture
def ctx90() -> AnalysisContext:
    return AnalysisContext.from_n(90)


@pytest.fixture
def ctx10() -> AnalysisContext:
    return AnalysisContext.from_n(10)


@pytest.fixture
def gens90() -> GeneratorSet:
    return GeneratorSet.build(-24300, [
        MordellPoint(-54, 81, Model.X3Q),
        MordellPoint(-45, 270, Model.X3Q),
    ], claimed_rank=2, source='worked example')


@pytest.fixture
def gens10() -> GeneratorSet:
    return GeneratorSet.build(-300, [MordellPoint(-9, 72)], claimed_rank=1, source='worked example')


@pytest.fixture
def generators_dir() -> str:
    return GENERATORS_DIR
