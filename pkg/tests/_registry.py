"""Shared registry so the acceptance tests can print one line per criterion."""

RESULTS: list[tuple[int, str, bool, str]] = []


def record(number: int, description: str, passed: bool, detail: str = "") -> None:
    RESULTS.append((number, description, passed, detail))
