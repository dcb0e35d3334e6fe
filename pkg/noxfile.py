import logging
from pathlib import Path

import nox  # noqa


pkg_name = "asianbounds"

PY38, PY39, PY310, PY311 = "3.8", "3.9", "3.10", "3.11"

# set the default activated sessions, minimal for CI
nox.options.sessions = ["tests", "flake8"]
nox.options.reuse_existing_virtualenvs = True  # this can be done using -r

nox_logger = logging.getLogger("nox")


class Folders:
    root = Path(__file__).parent
    ci_tools = root / "ci_tools"
    site = root / "site"
    reports_root = root / "docs" / "reports"
    test_reports = reports_root / "junit"
    test_xml = test_reports / "junit.xml"
    coverage_reports = reports_root / "coverage"
    coverage_xml = coverage_reports / "coverage.xml"
    flake8_reports = reports_root / "flake8"


DOCS_REQS = ["mkdocs-material", "mkdocs", "pymdown-extensions", "pygments", "mkdocs-gallery", "pillow"]


@nox.session(python=[PY38, PY39, PY310, PY311])
def tests(session):
    """Run the fast test suite. Coverage reports are generated on the most recent python only."""

    session.install("-e", ".")
    session.install("pytest")

    # check that it can be imported even from a different folder
    session.run("python", "-c", "import os; os.chdir('./docs/'); import %s" % pkg_name)

    if session.python != PY311:
        session.run("python", "-m", "pytest", "--cache-clear", "%s/tests/" % pkg_name)
    else:
        session.install("coverage", "pytest-html")
        session.run("coverage", "run", "--source", pkg_name, "-m", "pytest", "--cache-clear",
                    "--junitxml=%s" % Folders.test_xml, "%s/tests/" % pkg_name)
        session.run("coverage", "report")
        session.run("coverage", "xml", "-o", str(Folders.coverage_xml))
        session.run("coverage", "html", "-d", str(Folders.coverage_reports))


@nox.session(python=PY311)
def slow(session):
    """Run the reference-table reproductions, which need many Monte Carlo paths."""

    session.install("-e", ".")
    session.install("pytest")
    session.run("python", "-m", "pytest", "--cache-clear", "-m", "slow", "%s/tests/" % pkg_name)


@nox.session(python=PY38)
def flake8(session):
    """Launch flake8 qualimetry."""

    session.install("-r", str(Folders.ci_tools / "flake8-requirements.txt"))
    session.install(".")
    Folders.flake8_reports.mkdir(parents=True, exist_ok=True)

    # Options are set in `setup.cfg` file
    session.run("flake8", pkg_name, "--exit-zero", "--format=html", "--htmldir", str(Folders.flake8_reports),
                "--statistics")


@nox.session(python=PY311)
def docs(session):
    """Generates the doc and serves it on a local http server. Pass '-- build' to build statically instead."""

    # we need to install self for the doc gallery examples to work
    session.install(".")
    session.install(*DOCS_REQS)

    if session.posargs:
        session.run("mkdocs", *session.posargs)
    else:
        session.run("mkdocs", "serve")
