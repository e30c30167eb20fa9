from importlib.resources import files

import pytest

from feynhopf import load_theory
from feynhopf.cli import main
from feynhopf.hopf import antipode, coproduct_hopf, coproduct_tilde
from feynhopf.momenta import momentum_space
from feynhopf.renorm import Birkhoff
from feynhopf.schemes import Laurent
from feynhopf.specified import SpecifiedGraph
from feynhopf.textio import load_graphs, parse_algebra_element, parse_tensor_sum
from feynhopf.toys import random_character

PHI3 = str(files("feynhopf.data") / "phi3.graphs")
QED = str(files("feynhopf.data") / "qed.graphs")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(out):
    pairs = []
    for line in out.splitlines():
        k, _, v = line.partition("=")
        pairs.append((k, v))
    return pairs


@pytest.mark.parametrize("mode", ["tilde", "hopf"])
def test_coproduct_kv_round_trip(capsys, mode):
    code, out, _ = run(capsys, "coproduct", "--theory", "phi3", "--graph", PHI3, "--name", "nested_fish", "--mode", mode, "--format", "kv")
    assert code == 0
    terms = parse_tensor_sum("\n".join(v for k, v in kv(out) if k == "term"))
    rec = load_graphs(PHI3)["nested_fish"]
    G = SpecifiedGraph(rec.graph, rec.spec)
    theory = load_theory("phi3")
    assert terms == (coproduct_tilde(G, theory) if mode == "tilde" else coproduct_hopf(G, theory))
    assert dict(kv(out))["terms"] == "4"


def test_antipode_kv_round_trip(capsys):
    code, out, _ = run(capsys, "antipode", "--theory", "qed", "--graph", QED, "--name", "nested_electron_se", "--format", "kv")
    assert code == 0
    s = parse_algebra_element("\n".join(v for k, v in kv(out) if k == "term"))
    rec = load_graphs(QED)["nested_electron_se"]
    assert s == antipode(SpecifiedGraph(rec.graph, rec.spec), load_theory("qed"))


@pytest.mark.parametrize("mode", ["ms", "taylor"])
def test_birkhoff_kv_round_trip(capsys, mode):
    code, out, _ = run(capsys, "birkhoff", "--theory", "qed", "--graph", QED, "--name", "nested_electron_se", "--mode", mode, "--char", "random:2", "--format", "kv")
    assert code == 0
    d = dict(kv(out))
    assert d["reconstruction_ok"] == "True" and d["split_ok"] == "True"
    rec = load_graphs(QED)["nested_electron_se"]
    G = SpecifiedGraph(rec.graph, rec.spec)
    B = Birkhoff(random_character(load_theory("qed"), 2, mode))
    sp = momentum_space(G.graph)
    parsed = Laurent.parse(d["minus"], sp) if mode == "ms" else Laurent.parse(d["minus"], sp).terms.get(0)
    want = B.minus(G)
    assert parsed == want or (parsed is None and want.is_zero())


def test_birkhoff_text(capsys):
    code, out, _ = run(capsys, "birkhoff", "--theory", "phi3", "--graph", PHI3, "--name", "fish")
    assert code == 0
    assert "phi_- = z^-1: -1" in out and "[ok]" in out and "FAIL" not in out


def test_birkhoff_with_character_file(capsys, tmp_path):
    p = tmp_path / "fish.chars"
    p.write_text("char c mode=taylor\nvalue fish = 1 + p0^2 + p0^4\n")
    code, out, _ = run(capsys, "birkhoff", "--theory", "phi3", "--graph", PHI3, "--name", "fish", "--mode", "taylor", "--char", str(p))
    # p0 = -p3 by conservation; p3 is the free coordinate
    assert code == 0 and "phi_+ = p3^2 + p3^4" in out
    code, _, err = run(capsys, "birkhoff", "--theory", "phi3", "--graph", PHI3, "--name", "fish", "--mode", "ms", "--char", str(p))
    assert code == 2 and "mode=taylor" in err
    code, _, err = run(capsys, "birkhoff", "--theory", "phi3", "--graph", PHI3, "--name", "triangle", "--mode", "taylor", "--char", str(p))
    assert code == 2 and "canonical form" in err


def test_output_is_deterministic(capsys):
    args = ("coproduct", "--theory", "qed", "--graph", QED)
    assert run(capsys, *args) == run(capsys, *args)


def test_verify_corpus(capsys):
    code, out, _ = run(capsys, "verify", "--theory", "phi4")
    assert code == 0 and "ALL PASS" in out
    code, out, _ = run(capsys, "verify", "--theory", "qed", "--max-degree", "1", "--format", "kv")
    assert code == 0 and dict(kv(out))["all"] == "pass"


def test_verify_given_graphs(capsys):
    code, out, _ = run(capsys, "verify", "--theory", "qed", "--graph", QED, "--seed", "3")
    assert code == 0 and "ALL PASS" in out


def test_verify_reports_corrupted_sigma(capsys, tmp_path):
    p = tmp_path / "bad.graphs"
    p.write_text("graph bad\nvertex 0\nhalfedge 0 type=phi at=0\nhalfedge 1 type=phi at=0\nhalfedge 2 type=phi at=0\nsigma 0 1\nend\n")
    code, out, _ = run(capsys, "verify", "--theory", "phi3", "--graph", str(p))
    assert code == 1
    assert "FAIL graph structure" in out and "sigma(sigma(0))" in out and "bad" in out


def test_graph_outside_theory(capsys):
    code, _, err = run(capsys, "coproduct", "--theory", "phi4", "--graph", PHI3, "--name", "fish")
    assert code == 2 and "vertex 0 has signature {phi:3}" in err


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "coproduct", "--theory", "phi3", "--graph", str(tmp_path / "missing"))[0] == 2
    assert run(capsys, "coproduct", "--theory", "nosuch", "--graph", PHI3)[0] == 2
    assert run(capsys, "coproduct", "--theory", "phi3", "--graph", PHI3, "--name", "nope")[0] == 2
    assert run(capsys, "coproduct", "--theory", "phi3")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "birkhoff", "--theory", "phi3", "--graph", PHI3, "--dimension", "0")[0] == 2
    p = tmp_path / "spec.graphs"
    p.write_text("graph f\nvertex 0\nvertex 1\n" + "".join(f"halfedge {h} type=phi at={h // 3}\n" for h in range(6)) + "pair 1 4\npair 2 5\nend\n")
    code, _, err = run(capsys, "coproduct", "--theory", "phi3", "--graph", str(p))
    assert code == 2 and "spec 0 = <n>" in err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--theory", "phi3", "--max-degree", "2", "--max-half-edges", "15", "--vertex-types", "three", "--format", "kv")
    d = kv(out)
    assert code == 0
    assert ("degree_2", "5") in d and ("total", "8") in d
    assert sum(1 for k, _ in d if k == "graph") == 8
    code, _, err = run(capsys, "enumerate", "--theory", "phi3", "--max-half-edges", "40")
    assert code == 2 and "cap" in err


def test_dimension_flag(capsys):
    code, out, _ = run(capsys, "birkhoff", "--theory", "phi3", "--graph", PHI3, "--name", "fish", "--dimension", "2", "--format", "kv")
    assert code == 0 and dict(kv(out))["coordinates"].count("_") == 4
