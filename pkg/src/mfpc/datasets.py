"""Bundled example data."""

from importlib import resources

from .instance import FlowAssignment, Instance, parse_instance, parse_solution


def figure1_text() -> str:
    return resources.files("mfpc.data").joinpath("figure1.txt").read_text()


def figure1() -> Instance:
    """The seven-node example instance; its conflict-feasible optimum is 5."""
    return parse_instance(figure1_text())


def figure1_solution() -> FlowAssignment:
    text = resources.files("mfpc.data").joinpath("figure1.sol").read_text()
    return parse_solution(text, figure1().arc_count)
