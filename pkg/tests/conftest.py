import hypothesis.strategies as st
from hypothesis import settings

from sat2tri import formula as fm

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

EXAMPLE_Q = "((a | c) & (~a | b)) & (b | c)"


def literals(names="abcd"):
    var = st.sampled_from(list(names)).map(fm.Var)
    return st.one_of(var, var.map(fm.Not))


def clause_trees(names="abcd", max_leaves=3):
    return st.recursive(literals(names), lambda kids: st.builds(fm.Or, kids, kids), max_leaves=max_leaves)


def cnf_trees(names="abcd", max_clauses=3, max_leaves=3):
    return st.recursive(
        clause_trees(names, max_leaves), lambda kids: st.builds(fm.And, kids, kids), max_leaves=max_clauses
    )


# one summary line per acceptance criterion -------------------------------

_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    mark = _marks.get(report.nodeid)
    if mark is None:
        return
    n, title = mark
    entry = _criteria.setdefault(n, [title, []])
    if report.outcome != "passed":
        entry[1].append(report.nodeid.split("::")[-1])


_marks: dict[str, tuple] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _marks[item.nodeid] = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, failed = _criteria[n]
        status = "PASS" if not failed else "FAIL (" + ", ".join(failed) + ")"
        terminalreporter.write_line(f"criterion {n:2d}  {status:6s}  {title}")
