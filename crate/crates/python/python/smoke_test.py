"""Quick end-to-end check of the extension module against the repo fixtures."""

import json
import pathlib

import eo_holant

FIXTURES = pathlib.Path(__file__).resolve().parents[3] / "fixtures"


def main():
    grid = eo_holant.Grid((FIXTURES / "deq4-closed.grid").read_text())
    assert grid.is_closed()
    assert grid.evaluate("brute") == "2"
    assert grid.evaluate() == "2"
    assert grid.prune().evaluate("brute") == "2"

    looped = eo_holant.Grid((FIXTURES / "looped-delta.grid").read_text())
    assert looped.interpolate("2") == looped.evaluate("brute") == "1"

    m = eo_holant.Signature((FIXTURES / "m-delta1.sigset").read_text())
    assert m.arity == 4 and m.is_eo()
    assert dict(m.support()) == {"1100": "1", "1010": "1", "1001": "2"}
    assert m.dual().dual() == m
    verdict = json.loads(eo_holant.classify([m]))
    assert "outcome" in verdict

    g = eo_holant.Signature((FIXTURES / "deq4-1i.sig").read_text())
    gen = json.loads(g.generate())
    assert "report" in gen and "state" in gen

    code, out = eo_holant.run(["eval", str(FIXTURES / "deq4-closed.grid")])
    assert code == 0 and json.loads(out)["value"] == "2"
    code, _ = eo_holant.run(["eval", str(FIXTURES / "missing.grid")])
    assert code == 2
    print("smoke test ok")


if __name__ == "__main__":
    main()
