from pathlib import Path

import pytest

from qexpand import AnalyzerConfig, build_from_texts, kernels
from qexpand import _kernels_py

try:
    from qexpand import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

FIXTURES = Path(__file__).parent / "fixtures"
TOY100 = FIXTURES / "toy100"

BACKENDS = {"python": _kernels_py}
if _kernels_c is not None:
    BACKENDS["cython"] = _kernels_c


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    impl = BACKENDS[request.param]
    monkeypatch.setattr(kernels, "bm25_scores", impl.bm25_scores)
    monkeypatch.setattr(kernels, "association", impl.association)
    return request.param


@pytest.fixture
def ident():
    return AnalyzerConfig.identity()


TOY_DOCS = {"d1": "a a b", "d2": "a b b"}


@pytest.fixture
def toy_index(ident):
    return build_from_texts(TOY_DOCS, ident)


@pytest.fixture
def toy3_index(ident):
    return build_from_texts({"d1": "a a b", "d2": "a b b", "d3": "c"}, ident)


def write_corpus(root: Path, docs: dict) -> Path:
    for doc_id, text in docs.items():
        p = root / f"{doc_id}.txt"
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    return root


# --- acceptance summary -----------------------------------------------------

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion, reported in the summary")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        label = report.user_properties and dict(report.user_properties).get("criterion")
        if label:
            _acceptance.append((label, report.outcome))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker and not any(k == "criterion" for k, _ in item.user_properties):
        label = marker.args[0]
        if hasattr(item, "callspec"):
            label += f" [{item.callspec.id}]"
        item.user_properties.append(("criterion", label))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
