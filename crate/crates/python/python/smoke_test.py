"""Smoke test for the qcfsim extension. Run after installing the wheel."""

import json
import math

import qcfsim


def close(x, y, tol):
    assert abs(x - y) <= tol, (x, y)


def main():
    alpha = math.pi / 4

    c0, c1 = qcfsim.protocol_state(1, 0, alpha)
    close(c0, math.cos(alpha), 1e-12)
    close(c1, math.sin(alpha), 1e-12)

    rho0 = qcfsim.mixture_of_r(0, alpha)
    rho1 = qcfsim.mixture_of_r(1, alpha)
    close(qcfsim.trace_distance(rho0, rho1), math.cos(alpha), 1e-12)
    close(qcfsim.helstrom_success(rho0, rho1), 0.853553, 1e-6)

    close(qcfsim.bias_sender(alpha, 0.0), 0.353553, 1e-6)
    close(qcfsim.bias_receiver(alpha), 0.353553, 1e-6)
    close(qcfsim.bias_sender_berlin(math.pi / 2), 0.25, 1e-12)

    fp = qcfsim.fair_alpha(0.0)
    close(fp.alpha, alpha, 1e-12)
    close(fp.epsilon, 0.353553, 1e-6)
    assert qcfsim.qcf_curve_csv([0.0]).splitlines()[1] == "0,0.785398,0.353553"

    dr = qcfsim.dr_solve(0.0)
    close(dr.beta, 1.151128, 1e-6)
    close(dr.p_star, 0.956612, 1e-6)
    pa, pb, pc = qcfsim.dr_losing_probs(dr.alpha, dr.beta, 0.0)
    close(pa, pc, 1e-9)
    close(pb, pc, 1e-9)

    best, _ = qcfsim.oracle_sender_search(alpha, 1000)
    close(best, (1 + math.sin(alpha)) / 2, 1e-5)

    s = qcfsim.simulate_qcf(alpha, p=0.5, alice="cheat:0", trials=50_000, seed=3)
    assert abs(s.z) < 4, s
    w = qcfsim.estimate_worst_case("charlie", dr.alpha, dr.beta, 0.0, trials=20_000)
    assert abs(w.z) < 4, w

    lines = qcfsim.qcf_transcript(alpha, eta=0.5, seed=2).splitlines()
    assert json.loads(lines[-1])["tag"] == "outcome"

    for call in (lambda: qcfsim.fair_alpha(1.5), lambda: qcfsim.bias_receiver(3.0)):
        try:
            call()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        qcfsim.dr_solve(0.9999)
    except RuntimeError:
        pass
    else:
        raise AssertionError("expected RuntimeError")

    print("qcfsim smoke test passed")


if __name__ == "__main__":
    main()
