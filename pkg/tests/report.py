"""One PASS/FAIL line per acceptance criterion, echoed in the terminal summary."""

from __future__ import annotations

from contextlib import contextmanager

LINES: list[str] = []


def _emit(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} [{number:>2}] {title}" + (f" ({detail})" if detail else "")
    LINES.append(line)
    print(line)


@contextmanager
def criterion(number: int, title: str):
    """Run a criterion body; ``info["detail"]`` ends up on the report line."""
    info: dict = {}
    try:
        yield info
    except Exception as e:
        _emit(number, title, False, f"{type(e).__name__}: {e}".splitlines()[0][:160])
        raise
    _emit(number, title, True, info.get("detail", ""))
