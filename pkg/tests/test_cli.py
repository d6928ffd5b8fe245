"""End-to-end checks of the command line front end.

Everything runs in process through cli.main so exit codes and the exact
bytes on stdout/stderr are observable without subprocesses.
"""

from fractions import Fraction as Q

import pytest

import aemflow as af
from aemflow.cli import main

PARALLEL = "p aemfp 2 2 1\nn 0 s\nn 1 t\na 0 0 1 4\na 1 0 1 5\nh 0 const 1 0 1\n"
SINGLE = "p aemfp 2 1 1\nn 0 s\nn 1 t\na 0 0 1 3\nh 0 const 0 0\n"
AFFINE = "p aemfp 2 2 1\nn 0 s\nn 1 t\na 0 0 1 4\na 1 0 1 5\nh 0 affine 2 0 0 1\n"
CONVEX = "p aemfp 2 2 1\nn 0 s\nn 1 t\na 0 0 1 4\na 1 0 1 5\nh 0 poly 2 1 0 2 0 1\n"


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write, tmp_path


class TestSolve:
    def test_parallel_fixture(self, capsys, files):
        write, _ = files
        rc, out, _ = run(capsys, "solve", write("p.aemfp", PARALLEL))
        assert rc == 0
        lines = out.splitlines()
        assert "lambda 0 4" in lines
        assert "value 9" in lines
        assert "cutvalue 9" in lines

    def test_integer_on_gadget(self, capsys, files):
        write, _ = files
        inst, _ = af.generate_x3c_gadget(af.x3c_yes_instance(3))
        path = write("g.aemfp", af.write_instance(inst))
        rc, out, _ = run(capsys, "solve", path, "--integer")
        assert rc == 0
        assert "value 7" in out.splitlines()

    def test_plain_maxflow_no_sets(self, capsys, files):
        write, _ = files
        rc, out, _ = run(
            capsys, "solve", write("m.aemfp", "p aemfp 2 1 0\nn 0 s\nn 1 t\na 0 0 1 3\n")
        )
        assert rc == 0
        assert out.splitlines()[0] == "value 3"

    def test_methods_agree(self, capsys, files):
        write, _ = files
        path = write("p.aemfp", PARALLEL)
        outs = []
        for method in ("auto", "parametric", "concave"):
            rc, out, _ = run(capsys, "solve", path, "--method", method)
            assert rc == 0
            outs.append(out)
        assert outs[0] == outs[1] == outs[2]

    def test_concave_deviation_dispatches(self, capsys, files):
        write, _ = files
        rc, out, _ = run(capsys, "solve", write("a.aemfp", AFFINE))
        assert rc == 0
        assert "value 9" in out.splitlines()

    def test_deterministic_bytes(self, capsys, files):
        write, _ = files
        path = write("p.aemfp", PARALLEL)
        _, first, _ = run(capsys, "solve", path)
        _, second, _ = run(capsys, "solve", path)
        assert first == second


class TestExitCodes:
    def test_parse_error_is_2(self, capsys, files):
        write, _ = files
        rc, _, err = run(capsys, "solve", write("b.aemfp", "p aemfp 1\n"))
        assert rc == 2
        assert err.startswith("error ParseError: line 1")

    def test_missing_file_is_2(self, capsys):
        rc, _, err = run(capsys, "solve", "/nonexistent/path.aemfp")
        assert rc == 2
        assert err.startswith("error ")

    def test_usage_error_is_2(self, capsys):
        rc, _, err = run(capsys, "frobnicate")
        assert rc == 2
        assert err.startswith("error Usage:")

    def test_convex_solve_is_4(self, capsys, files):
        write, _ = files
        rc, _, err = run(capsys, "solve", write("c.aemfp", CONVEX))
        assert rc == 4
        assert err.startswith("error UnsupportedDeviation")

    def test_integer_on_affine_is_4(self, capsys, files):
        write, _ = files
        rc, _, err = run(capsys, "solve", write("a.aemfp", AFFINE), "--integer")
        assert rc == 4
        assert "constant-shift" in err

    def test_oracle_budget_is_4(self, capsys, files):
        write, _ = files
        rc, _, err = run(
            capsys, "oracle", write("p.aemfp", PARALLEL), "--budget", "2"
        )
        assert rc == 4
        assert err.startswith("error BudgetExceeded")


class TestVerify:
    def test_accepts_solver_output(self, capsys, files):
        write, _ = files
        path = write("p.aemfp", PARALLEL)
        _, out, _ = run(capsys, "solve", path)
        flow = write("flow.txt", out)
        rc, out, _ = run(capsys, "verify", path, flow)
        assert rc == 0
        assert out == "ok value 9\n"

    def test_names_homologous_violation(self, capsys, files):
        write, _ = files
        path = write("p.aemfp", PARALLEL)
        flow = write("flow.txt", "flow 0 1\nflow 1 5\n")
        rc, out, _ = run(capsys, "verify", path, flow)
        assert rc == 1
        assert "violation homologous set 0 edge 1" in out

    def test_names_capacity_and_conservation(self, capsys, files):
        write, _ = files
        path = write(
            "chain.aemfp",
            "p aemfp 3 2 0\nn 0 s\nn 2 t\na 0 0 1 2\na 1 1 2 2\n",
        )
        flow = write("flow.txt", "flow 0 3\nflow 1 1\n")
        rc, out, _ = run(capsys, "verify", path, flow)
        assert rc == 1
        assert "violation capacity edge 0" in out
        assert "violation conservation node 1 net -2" in out


class TestBreakpoints:
    def test_single_edge_single_segment(self, capsys, files):
        write, tmp = files
        path = write("s.aemfp", SINGLE)
        csv = str(tmp / "out.csv")
        rc, out, _ = run(capsys, "breakpoints", path, "-o", csv)
        assert rc == 0
        assert (tmp / "out.csv").read_text() == "lambda,F,slope\n0,0,1\n3,3,1\n"
        assert "argmax 3" in out and "value 3" in out

    def test_parallel_profile(self, capsys, files):
        write, tmp = files
        path = write("p.aemfp", PARALLEL)
        csv = str(tmp / "out.csv")
        rc, _, _ = run(capsys, "breakpoints", path, "-o", csv)
        assert rc == 0
        rows = (tmp / "out.csv").read_text().splitlines()
        assert rows[0] == "lambda,F,slope"
        assert rows[1:] == ["0,2,2", "3,8,1", "4,9,1"]

    def test_affine_rejected_with_4(self, capsys, files):
        write, tmp = files
        rc, _, err = run(
            capsys,
            "breakpoints",
            write("a.aemfp", AFFINE),
            "-o",
            str(tmp / "x.csv"),
        )
        assert rc == 4
        assert err.startswith("error UnsupportedDeviation")


class TestOracle:
    def test_fractional_matches_solver(self, capsys, files):
        write, _ = files
        rc, out, _ = run(capsys, "oracle", write("p.aemfp", PARALLEL))
        assert rc == 0
        assert out == "value 9\n"

    def test_integer_gadget(self, capsys, files):
        write, _ = files
        inst, _ = af.generate_x3c_gadget(af.x3c_yes_instance(3))
        path = write("g.aemfp", af.write_instance(inst))
        rc, out, _ = run(capsys, "oracle", path, "--integer")
        assert rc == 0
        assert out == "value 7\n"


class TestGenerate:
    @pytest.mark.parametrize(
        "argv,kind",
        [
            (("generate", "x3c", "--q", "3"), "X3CBasic"),
            (("generate", "approx", "--q", "3", "--k", "1"), "ApproxChain"),
            (("generate", "convex", "--q", "3"), "ConvexX3C"),
            (("generate", "random", "--n", "5", "--m", "7", "--k", "2"), "Random"),
        ],
    )
    def test_kinds_produce_parseable_files(self, capsys, files, argv, kind):
        write, tmp = files
        out_path = str(tmp / "g.aemfp")
        rc, out, _ = run(capsys, *argv, "-o", out_path)
        assert rc == 0
        assert out.splitlines()[0] == f"wrote {out_path}"
        assert f"meta kind {kind}" in out
        inst = af.parse_instance((tmp / "g.aemfp").read_text())
        assert inst.m >= 1

    def test_no_variant_value_differs(self, capsys, files):
        write, tmp = files
        ours = str(tmp / "no.aemfp")
        rc, out, _ = run(
            capsys, "generate", "x3c", "--q", "6", "--variant", "no", "-o", ours
        )
        assert rc == 0
        inst = af.parse_instance((tmp / "no.aemfp").read_text())
        assert af.oracle_integer(inst) == 13

    def test_seeded_random_is_byte_stable(self, capsys, files):
        write, tmp = files
        a, b = str(tmp / "a.aemfp"), str(tmp / "b.aemfp")
        args = ("generate", "random", "--n", "6", "--m", "8", "--k", "1", "--seed", "9")
        assert run(capsys, *args, "-o", a)[0] == 0
        assert run(capsys, *args, "-o", b)[0] == 0
        assert (tmp / "a.aemfp").read_bytes() == (tmp / "b.aemfp").read_bytes()

    def test_bad_q_is_2(self, capsys, files):
        write, tmp = files
        rc, _, err = run(
            capsys, "generate", "x3c", "--q", "4", "-o", str(tmp / "x.aemfp")
        )
        assert rc == 2
        assert err.startswith("error ValidationError")
