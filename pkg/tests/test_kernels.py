import pytest

from pix import _kernels_py
from pix.arith import primes_up_to
from pix.kernels import BACKEND, available_backends

from conftest import naive_count


def random_sextic(rng, bound=50):
    return [rng.randint(-bound, bound) for _ in range(6)] + [rng.randint(1, bound)]


@pytest.mark.parametrize("p", primes_up_to(31))
def test_count_matches_naive(backend, p, rng):
    for _ in range(15):
        f = random_sextic(rng)
        fbar = [c % p for c in f]
        assert tuple(backend.count_points(fbar, p)) == naive_count(fbar, p)


def test_roots_and_first_smooth(backend, rng):
    for p in (2, 3, 5, 7, 101, 65537):
        for _ in range(10):
            f = [c % p for c in random_sextic(rng, 10**6)]
            roots = sorted(backend.roots(f, p))
            if p < 200:
                assert roots == [z for z in range(p) if sum(c * pow(z, i, p) for i, c in enumerate(f)) % p == 0]
            else:
                assert all(sum(c * pow(z, i, p) for i, c in enumerate(f)) % p == 0 for z in roots)
            z = backend.first_smooth_z(f, p)
            assert z == _kernels_py.first_smooth_z(f, p)


def test_first_square_value(backend):
    p = 120121
    f = [p - 19, 0, 1]  # z^2 - 19
    z = backend.first_square_value(f, p)
    assert z == _kernels_py.first_square_value(f, p)
    v = (z * z - 19) % p
    assert v == 0 or pow(v, (p - 1) // 2, p) == 1


def test_char_two_semantics(backend):
    # y^2 = z^2 + z + 1 over F_2: one point per z, both smooth since f' = 1
    assert tuple(backend.count_points([1, 1, 1], 2)) == (2, 2)
    # y^2 = z^2: f' = 0 so every point is singular
    assert tuple(backend.count_points([0, 0, 1], 2)) == (2, 0)


def test_backends_agree_at_large_p(rng):
    backs = available_backends()
    if len(backs) < 2:
        pytest.skip("compiled extension not built")
    p = 100003
    f = [c % p for c in random_sextic(rng, 10**6)]
    assert tuple(backs["compiled"].count_points(f, p)) == tuple(backs["python"].count_points(f, p))


def test_backend_selected():
    assert BACKEND in ("compiled", "python")


def test_benchmark_script_runs():
    import subprocess
    import sys
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    r = subprocess.run([sys.executable, str(script), "--primes", "101,1009", "--repeat", "1"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "count_points" in r.stdout
