import pytest

from webqa import KbcQuery, Pipeline, load_fixture_corpus, load_fixture_kb, sample_queries

SELECTED = ("born", "birthplace")


@pytest.fixture(scope="session")
def kb():
    return load_fixture_kb()


@pytest.fixture(scope="session")
def corpus():
    return load_fixture_corpus()


@pytest.fixture(scope="session")
def splits(kb):
    return sample_queries(kb, "wasBornIn", 30, 10, 7)


@pytest.fixture(scope="session")
def pipeline(kb, corpus):
    return Pipeline(kb, corpus)


@pytest.fixture(scope="session")
def trained(pipeline, splits):
    """Filter and ranker trained on the fixture's 30 training queries."""
    train, _ = splits
    f, r, _ = pipeline.train(train, SELECTED, seed=0)
    return {"filter": f, "ranker": r}


@pytest.fixture
def marvin():
    return KbcQuery("Marvin_Minsky", "wasBornIn")


_criteria: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = f"{mark.args[0]:>2}"
    if rep.failed or (rep.when == "call" and key not in _criteria):
        _criteria[key] = ("PASS" if rep.passed else "FAIL", mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=int):
        status, title = _criteria[key]
        terminalreporter.write_line(f"[{status}] criterion {key.strip()}: {title}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")
