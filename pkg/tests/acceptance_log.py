"""Collects one summary line per acceptance criterion."""

LINES: dict[int, str] = {}


def record(number: int, name: str, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    line = f"{status} criterion {number:2d} {name}: {detail}"
    LINES[number] = line
    print(line)
