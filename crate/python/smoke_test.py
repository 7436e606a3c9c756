"""Smoke test for the oisac Python module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/oisac-*.whl
"""

import cmath
import math

import oisac

CONFIG = """
[experiment]
scheme = "dco_ofdm"
snr_db_grid = [0.0, 10.0, 20.0]
seed = 7
min_bits = 20000
min_trials = 16
max_trials = 64
"""


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    x = [cmath.exp(1j * 0.3 * k) for k in range(16)]
    y = oisac.dft(oisac.dft(x), inverse=True)
    assert all(close(a, b) for a, b in zip(x, y))
    assert close(sum(abs(v) ** 2 for v in oisac.dft(x)), sum(abs(v) ** 2 for v in x))

    seq = oisac.msequence(5)
    assert len(seq) == 31 and sum(seq) == 16

    z = oisac.hilbert_analytic([math.cos(2 * math.pi * 4 * n / 64) for n in range(64)])
    assert all(close(abs(v), 1.0, 1e-9) for v in z)

    clipped, stats = oisac.dc_bias_and_clip([1.0, -1.0] * 8, 0.5)
    assert min(clipped) >= 0.0 and close(stats["clipped_fraction"], 0.5)

    try:
        oisac.dft([1.0, 2.0, 3.0])
    except oisac.ConfigError:
        pass
    else:
        raise AssertionError("non power-of-two length accepted")

    try:
        oisac.Experiment.from_toml("[experiment]\nscheme = 'fm'\n")
    except oisac.ConfigError:
        pass
    else:
        raise AssertionError("bad scheme accepted")

    exp = oisac.Experiment.from_toml(CONFIG)
    res = exp.sweep(threads=2)
    assert len(res) == 3 and res.scheme == "dco_ofdm"
    assert res.ber[0] > res.ber[-1]
    assert res.to_csv().splitlines()[0] == oisac.SWEEP_HEADER
    assert res.to_csv() == exp.sweep(threads=1).to_csv()
    again = oisac.Experiment.from_toml(exp.to_toml())
    assert again.sweep().to_csv() == res.to_csv()

    prob = oisac.AllocationProblem([1.0, 0.5, 0.1], [0.2, 0.4, 0.1], total_power=2.0, weight=0.5)
    p = prob.solve()
    assert close(sum(p), 2.0, 1e-9) and prob.kkt_violation(p) < 1e-6

    optical, baseband = exp.dump_waveform()
    assert min(optical) >= 0.0 and baseband is not None
    optical, baseband = exp.dump_waveform("ppm")
    assert baseband is None

    failed = [name for name, ok, _ in oisac.selftest() if not ok]
    assert not failed, failed

    print(f"oisac {oisac.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
