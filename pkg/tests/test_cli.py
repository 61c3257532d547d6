import pytest

from main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_validate(intro_file, capsys):
    assert main(["validate", intro_file]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "OK: N=4, rank 3, cage 1,1,1,2"


def test_validate_reports_axiom_failures(write, capsys):
    path = write("bad.txt", "N 1\nS - 1\nS 1 1\n")
    assert main(["validate", path]) == EXIT_FAILURE
    assert capsys.readouterr().err.startswith("NotNormalized")


def test_parse_errors_are_usage_errors(write, capsys):
    path = write("broken.txt", "N 2\nS - 0\n")
    assert main(["validate", path]) == EXIT_USAGE
    assert "ParseError: line" in capsys.readouterr().err


def test_flats(intro_file, capsys):
    assert main(["flats", intro_file]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 11
    assert lines[4] == "1,0,0,0 : 1"


def test_cage_override(intro_file, capsys):
    assert main(["validate", intro_file, "--cage", "2", "2", "2", "3"]) == EXIT_OK
    assert "cage 2,2,2,3" in capsys.readouterr().out


def test_whitney(intro_file, capsys):
    assert main(["whitney", intro_file]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "1 4 5 1"


def test_hasse_to_file(intro_file, tmp_path):
    out = tmp_path / "hasse.dot"
    assert main(["hasse", intro_file, "--dot", str(out)]) == EXIT_OK
    assert out.read_text().startswith("digraph lattice {")


def test_check_axioms_round_trip(intro_file, write, capsys):
    assert main(["flats", intro_file, "--covers"]) == EXIT_OK
    lattice_file = write("lattice.txt", capsys.readouterr().out)
    assert main(["check-axioms", lattice_file, "--reconstruct"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("PASS")
    assert "N 4" in out


def test_ordinary_flats_fail(intro_file, capsys):
    assert main(["check-axioms", intro_file, "--ordinary"]) == EXIT_FAILURE
    assert capsys.readouterr().out.startswith("FAIL: NotGraded")


def test_simplify(write, tmp_path, capsys):
    path = write("two.txt", "N 2\ncage 2 2\nS - 0\nS 1 2\nS 2 2\nS 1,2 2\n")
    out = tmp_path / "simple.txt"
    assert main(["simplify", path, "--output", str(out)]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["Reduce(1) -> cage 1,2", "Reduce(2) -> cage 1,1"]
    assert "cage 1 1" in out.read_text()


def test_cohomology(intro_file, capsys):
    assert main(["cohomology", intro_file, "--coeffs", "ones"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "y_(0,0,0,1) * y_(0,0,0,1) = 1 * y_(0,0,0,2)" in out


def test_bases_and_circuits(intro_file, capsys):
    assert main(["bases", intro_file, "--multiset", "1,1,0,1"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["1,1,0,1"]
    assert main(["circuits", intro_file]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0,1,1,2", "1,0,1,2", "1,1,0,2", "1,1,1,0"]


def test_bad_multiset(intro_file, capsys):
    assert main(["bases", intro_file, "--multiset", "1,x"]) == EXIT_USAGE


def test_realize_reports_genericity(intro_subspace_file, capsys):
    assert main(["realize", intro_subspace_file, "--check-pg"]) == EXIT_FAILURE
    out = capsys.readouterr().out
    assert "pg: no at 0,1,1,1 (rank 3, codimension 2)" in out
    assert main(["realize", intro_subspace_file, "--check-pg", "--translate", "--seed", "4"]) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith("pg: yes")


def test_fuzz(capsys):
    args = ["fuzz", "--seed", "1", "--count", "3", "--max-n", "2", "--max-rank", "2", "--max-cage", "2"]
    assert main(args) == EXIT_OK
    assert capsys.readouterr().out.strip().startswith("fuzz seed 1: 3 instances, 0 failing")


def test_fuzz_bounds(capsys):
    assert main(["fuzz", "--max-n", "9"]) == EXIT_USAGE
