from pathlib import Path

import pytest

import gogbench

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def fixture(name):
    return gogbench.load(str(FIXTURES / name))


def test_h1_fixtures():
    assert gogbench.h1(fixture("hnn_f1.json"))["text"] == "Z ⊕ Z/2"
    g2 = gogbench.h1(fixture("genus2.json"))
    assert g2["betti"] == 4 and g2["divisors"] == []


def test_round_trip():
    for path in sorted(FIXTURES.glob("*.json")):
        text = path.read_text()
        assert gogbench.loads(text).dumps() == text


def test_bad_documents_raise():
    with pytest.raises(gogbench.InvalidInput, match="unknown format version 9"):
        gogbench.loads('{"format_version": 9, "kind": "gog"}')
    with pytest.raises(ValueError):
        gogbench.loads("{")


def test_snf_is_exact():
    big = 10**30 + 7
    s = gogbench.snf([[2, 4], [6, 8]])
    assert s["rank"] == 2
    assert [s["D"][0][0], s["D"][1][1]] == [2, 4]
    assert gogbench.cokernel([[big, 0]], 2)["divisors"] == [big]


def test_subgroup_counts():
    tables = gogbench.enumerate_subgroups(2, 3)
    by_index = [len(t[0]) for t in tables]
    assert by_index.count(2) == 3 and by_index.count(3) == 7


def test_elevations_partition_index():
    seed = fixture("torsion_seed.json")
    rows = gogbench.elevations(seed, "v", [[1, 0], [0, 1]])
    by_class = {}
    for r in rows:
        by_class[r["class"]] = by_class.get(r["class"], 0) + r["degree"]
    assert by_class and all(total == 2 for total in by_class.values())


def test_covers_are_valid_and_multiplicative():
    base = fixture("hnn_f1.json")
    chi = gogbench.euler_characteristic(base)
    covers = gogbench.enumerate_covers(base, 3)
    assert covers
    for c in covers:
        assert c.cover
        assert gogbench.validate(c) == []
        assert gogbench.euler_characteristic(c) == gogbench.degree(c) * chi


def test_piece_and_chain():
    piece = gogbench.find_torsion_piece(fixture("torsion_seed.json"), 2)
    assert piece is not None and piece.kind == gogbench.DocKind.TORSION_PIECE
    for alpha in range(1, 4):
        ch = gogbench.chain(piece, alpha)
        assert gogbench.torsion_exponent(ch, 2) >= alpha
        assert gogbench.predegree(ch) <= alpha * gogbench.predegree(piece)
    assert gogbench.find_torsion_piece(fixture("genus2.json"), 2, max_index=2) is None


def test_one_tower_step():
    report = gogbench.build_tower(fixture("seed_tower.json"))
    assert report["status"] == "ok"
    assert report["check"] == []
    assert report["csv"].startswith("step,prime,degree")
    assert report["stages"][0]["excluded"]


def test_cli_exit_codes():
    code, out, _ = gogbench.run_cli(["h1", str(FIXTURES / "hnn_f1.json")])
    assert code == 0 and out.strip() == "Z ⊕ Z/2"
    code, _, _ = gogbench.run_cli(["torsion-piece", str(FIXTURES / "genus2.json"), "--max-index", "2"])
    assert code == 2
    code, _, _ = gogbench.run_cli(["h1", str(FIXTURES / "missing.json")])
    assert code == 1
