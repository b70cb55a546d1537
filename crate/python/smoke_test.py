"""Smoke test for the irw extension module.

Build and install it first:

    pip install --no-build-isolation ./crates/py
"""

import irw


def main():
    t = irw.Term("rec X. a(X)")
    u = irw.Term("a(rec Y. a(a(Y)))")
    assert t == u and hash(t) == hash(u)
    assert not t.is_finite()
    assert str(t.truncate(2)) == "a(a(cut))"
    assert t.agreement_depth(irw.Term("a(b)")) == 1

    m_acc = irw.Machine.fixture("m_acc")
    assert m_acc.kind == "det-two-sided"
    assert irw.Machine(str(m_acc)).name == "m_acc"
    configs, halted = irw.tm_run(m_acc, "0 S S q0 S S S 0", 100)
    assert halted and len(configs) == 6
    assert irw.eval_rel(m_acc, 2, 3) == "holds"
    assert irw.eval_rel(irw.Machine.fixture("m_rej"), 2, 3) == "fails"
    assert irw.eval_fun(irw.Machine.fixture("halt_now"), 3) == 3

    pickn = irw.compile("pickn")
    assert len(pickn) == 3
    reached = pickn.reach(pickn.term("pickn"), pickn.term("ok(S(S(S(0(end)))))"))
    assert reached is not None and len(reached[1].splitlines()) == 7
    assert len(irw.Trs(str(pickn))) == 3

    nd_right = irw.Machine.fixture("nd_right")
    nd_pong = irw.Machine.fixture("nd_pong")
    r = irw.compile("R", nd_right)
    z = "rec X. a(X)"
    nf = r.normalize(r.term(f"run(xi,q0({z}),D1({z}),D2({z}))"), epochs=3)
    assert nf is not None and str(nf[0]) == "bot"

    assert irw.omega_member(nd_right, "(a)^w") == "accepted"
    assert irw.omega_member(nd_pong, "(a)^w") == "rejected_exhausted"
    assert irw.omega_classify(nd_pong, "(a)^w") == [("no", "yes", "no")]

    assert irw.check_pickn(20).holds()
    assert irw.check_two_sided(20, 3, 30, seed=1).verdict == "holds"
    report, limit = irw.check_limit_correspondence(nd_right, "(a)^w")
    assert report.holds() and limit == t
    assert str(report).rstrip().endswith("VERDICT: holds")
    print("smoke test ok")


if __name__ == "__main__":
    main()
