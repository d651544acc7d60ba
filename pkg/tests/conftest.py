import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("exact", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion and assert it."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(number: int, title: str, results: list, detail: str = "") -> None:
        bad = [r for r in results if not getattr(r, "ok", r)]
        status = "PASS" if results and not bad else "FAIL"
        line = f"{status} criterion {number:2d}: {title} ({len(results) - len(bad)}/{len(results)})"
        if detail:
            line += f"  {detail}"
        lines.append(line)
        print(line)
        assert results and not bad, "\n".join(r.line() if hasattr(r, "line") else str(r) for r in bad[:5])

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
