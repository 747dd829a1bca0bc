import functools

from hypothesis import HealthCheck, settings

from cayley_iwasawa.chartab import character_table
from cayley_iwasawa.groups import all_nonidentity, build_group

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

CATALOG = ("cyclic:5", "cyclic:6", "symmetric:3", "symmetric:4", "dihedral:4", "quaternion8",
           "heisenberg:3", "product(cyclic:3,symmetric:3)")


@functools.lru_cache(maxsize=None)
def group(name):
    return build_group(name)


@functools.lru_cache(maxsize=None)
def table(name):
    return character_table(group(name))


@functools.lru_cache(maxsize=None)
def full_set(name):
    return all_nonidentity(group(name))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
