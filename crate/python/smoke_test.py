"""Smoke test for the collective_decay_py extension module.

Exercises one representative call from every part of the binding surface:
state construction, generator assembly, evolution, steady states, the
dark-sector tools, the closed-form solutions, the memory cycle, and the
error mapping. Run from this directory (or anywhere with the built
`collective_decay_py.so` on sys.path):

    python3 smoke_test.py
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import collective_decay_py as cdp


def check(label, condition):
    if not condition:
        raise SystemExit(f"FAIL: {label}")
    print(f"ok: {label}")


def main():
    check("version is a string", isinstance(cdp.version(), str))

    # --- states ------------------------------------------------------
    w3 = cdp.make_w(3)
    check("W_3 lives on an 8-dimensional register", w3.dim == 8)
    check("W_3 is normalized", abs(w3.norm() - 1.0) < 1e-12)
    amps = w3.amplitudes()
    check(
        "W_3 is the uniform single-excitation pattern",
        all(abs(amps[1 << k] - 1 / math.sqrt(3)) < 1e-12 for k in range(3)),
    )
    j, m = w3.dicke_numbers()
    check("W_3 has (j, m) = (3/2, -1/2)", abs(j - 1.5) < 1e-9 and abs(m + 0.5) < 1e-9)

    r = 1 / math.sqrt(2)
    q = [r, -r, 0.0]
    check("zero-sum check accepts a balanced pattern", cdp.zsa_check(q))
    check("zero-sum check rejects W amplitudes", not cdp.zsa_check([r, r]))
    eta = cdp.make_eta(q)
    rho = eta.to_density()
    check("pure density has unit purity", abs(rho.purity() - 1.0) < 1e-12)
    check("density trace is 1", abs(rho.trace() - 1.0) < 1e-12)

    # --- dark-state immunity under collective vacuum decay -------------
    gen = cdp.Generator.vacuum_collective(3, 1.0)
    states = cdp.evolve(gen, rho, [0.0, 0.5, 2.0])
    fids = [cdp.fidelity(eta, s) for s in states]
    check(
        "zero-sum state is immune to collective decay",
        all(abs(f - 1.0) < 1e-9 for f in fids),
    )

    # --- superradiance of W_3 ------------------------------------------
    w_end = cdp.evolve(gen, w3.to_density(), [5.0])[-1]
    ground3 = cdp.ground_state(3)
    check(
        "W_3 relaxes to the ground state",
        cdp.fidelity(ground3, w_end) > 1 - 1e-6,
    )
    closed = cdp.absd_closed_form([1 / math.sqrt(3)] * 3, 1.0, 5.0)
    check(
        "numerical ground population matches the closed form",
        abs(cdp.fidelity(ground3, w_end) - closed["s"]) < 1e-8,
    )

    # --- dark subspace dimensions --------------------------------------
    basis = gen.dark_subspace(1)
    check("three atoms carry a 2-dimensional dark sector", len(basis) == 2)
    check("dark vectors are Dicke states with j = 1/2",
          all(abs(v.dicke_numbers()[0] - 0.5) < 1e-9 for v in basis))
    check("degeneracy of j = 1 for 4 atoms is 3", cdp.dicke_degeneracy(4, 1.0) == 3)

    # --- squeezed-bath steady state ------------------------------------
    n_occ = 1.0
    bath = cdp.Thermostat(n_occ, math.sqrt(n_occ * (n_occ + 1)))
    check("saturated correlator is flagged", bath.is_maximally_squeezed())
    gen2 = cdp.Generator.collective(2, bath, 1.0)
    ss = cdp.steady_state(gen2, cdp.ground_state(2).to_density())
    target = cdp.two_atom_squeezed_steady(n_occ)
    check(
        "two atoms purify into the squeezed steady state",
        cdp.fidelity(target, ss) > 1 - 1e-6 and ss.purity() > 1 - 1e-6,
    )

    # --- four-site purification target ---------------------------------
    q4 = [0.5, -0.5, 0.5, -0.5]
    final4 = cdp.eta4_squeezed_final(q4, n_occ)
    check("four-site target is normalized", abs(final4.norm() - 1.0) < 1e-12)

    # --- memory cycle ---------------------------------------------------
    cycle = cdp.memory_cycle(q, 1.0, 2.0, cdp.Thermostat.vacuum(), 1.0)
    check(
        "zero-sum pattern survives a write-store-read cycle",
        abs(cycle["read_fidelity"] - 1.0) < 1e-8,
    )
    check("ideal write time is pi/2", abs(cycle["write_time"] - math.pi / 2) < 1e-12)

    # --- combined generators and trace distance -------------------------
    mixed = cdp.Generator.combine(
        [gen, cdp.Generator.single_atom(3, 0, cdp.Thermostat.vacuum(), 0.4)]
    )
    decayed = cdp.evolve(mixed, rho, [1.0])[-1]
    check(
        "adding single-atom decay breaks the immunity",
        cdp.trace_distance(rho, decayed) > 1e-3,
    )

    # --- error mapping ---------------------------------------------------
    try:
        cdp.make_eta([0.5, 0.5])
        raise SystemExit("FAIL: unnormalized amplitudes were accepted")
    except ValueError:
        print("ok: validation errors raise ValueError")
    try:
        cdp.Thermostat(0.5, 2.0)
        raise SystemExit("FAIL: unphysical correlator was accepted")
    except ValueError:
        print("ok: correlator bound raises ValueError")
    try:
        # A lopsided pattern mixes two j sectors, so it is no J² eigenstate.
        lopsided = cdp.make_eta([math.sqrt(0.9), -math.sqrt(0.1), 0.0])
        lopsided.dicke_numbers()
        raise SystemExit("FAIL: non-eigenstate accepted by dicke_numbers")
    except RuntimeError:
        print("ok: numerical failures raise RuntimeError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
