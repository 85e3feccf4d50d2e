import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dfautomata import data_path
from dfautomata.formats import load_definition
from dfautomata.goedel import GoedelCoding, compile_nda
from dfautomata.symbolic import ContextFreeGrammar, cfg_to_gs

GOLDEN = Path(__file__).parent / "golden"

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def grammar():
    return ContextFreeGrammar(
        ("S", "VP", "NP", "V"),
        ("the", "dog", "chased", "cat"),
        (("S", ("NP", "VP")), ("VP", ("V", "NP")), ("NP", ("the", "dog")),
         ("V", ("chased",)), ("NP", ("the", "cat"))),
        "S",
    )


@pytest.fixture(scope="session")
def parser_gs(grammar):
    return cfg_to_gs(grammar, ["NP", "V"])


@pytest.fixture(scope="session")
def coding():
    # input-side codes inferred from the symbologram geometry: NP=0, V=1
    return GoedelCoding({"NP": 0, "V": 1, "VP": 2, "S": 3}, {"NP": 0, "V": 1}, 4, 2)


@pytest.fixture(scope="session")
def nda(parser_gs, coding):
    return compile_nda(parser_gs, coding)


@pytest.fixture(scope="session")
def example_definition():
    return load_definition(data_path("grammar_np_v_np.json"))


@pytest.fixture(scope="session")
def increment_definition():
    return load_definition(data_path("tm_binary_increment.json"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")
