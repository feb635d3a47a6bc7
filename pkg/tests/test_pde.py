import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from ellperiods.errors import (BranchCollision, JacobianIllConditioned, PDEError, PipelineError,
                               SignAmbiguous)
from ellperiods.pde import (FamilyDirection, FamilyTrack, Partials, Sample, condition_number,
                            default_directions, directional_to_partial, j_value, match_sample,
                            random_directions, sample_configuration, track_family, verify_ecliptic)

N = 8
UNIT = tuple(tuple(int(i == j) for j in range(N)) for i in range(N))


@pytest.fixture(autouse=True)
def precision():
    with mp.workprec(128):
        yield


def rand_c(rng):
    return mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))


def linear_track(rng, delta):
    """Samples of t(s) = t0 + A s and H(s) = H0 + sum_i (dH/dt_i) (t_i(s) - t0_i), exactly linear."""
    A = [[rand_c(rng) + (3 if d == i else 0) for i in range(N)] for d in range(N)]
    dH = [[[rand_c(rng) for _ in range(N)] for _ in range(N)] for _ in range(N)]  # dH[i][r][j]
    t0 = [mpc(k + 1, 0) for k in range(N)]
    H0 = [[rand_c(rng) for _ in range(N)] for _ in range(N)]
    z0 = [mpc(10 * k, 0) for k in range(N)]

    def at(d, s):
        t = [t0[i] + s * A[d][i] for i in range(N)]
        H = [[H0[r][j] + sum(dH[i][r][j] * s * A[d][i] for i in range(N)) for j in range(N)]
             for r in range(N)]
        return Sample(z0, t, H)

    dl = mpf(delta.numerator) / delta.denominator
    track = FamilyTrack(delta, default_directions(), Sample(z0, t0, H0),
                        [at(d, dl) for d in range(N)], [at(d, -dl) for d in range(N)])
    return track, A, dH


def test_linear_model_recovers_partials():
    rng = random.Random(3)
    track, A, dH = linear_track(rng, Fraction(1, 2 ** 10))
    p = directional_to_partial(track)
    for d in range(N):
        for i in range(N):
            assert abs(p.jacobian[d][i] - A[d][i]) < mpf(2) ** -100
    for i in range(N):
        for j in range(N):
            for r in range(N):
                assert abs(p.d_eta[i][j][r] - dH[i][r][j]) < mpf(2) ** -90
    assert p.condition == condition_number(A) or abs(p.condition - condition_number(A)) < 1e-20


def test_zero_step_is_ill_conditioned():
    track, _, _ = linear_track(random.Random(4), Fraction(1, 2 ** 10))
    track = FamilyTrack(Fraction(0), track.directions, track.base, [track.base] * N, [track.base] * N)
    with pytest.raises(JacobianIllConditioned):
        directional_to_partial(track)


def test_direction_count_checked():
    track, _, _ = linear_track(random.Random(5), Fraction(1, 2 ** 10))
    track = FamilyTrack(track.delta, track.directions[:7], track.base, track.plus[:7], track.minus[:7])
    with pytest.raises(PDEError):
        directional_to_partial(track)


def synthetic_solution(rng):
    """Orthonormal frame for the unit form with partials satisfying the system exactly."""
    H = [[mpc(int(r == j)) for j in range(N)] for r in range(N)]
    a = [[rand_c(rng) if i != k else 0 for k in range(N)] for i in range(N)]
    d = [[None] * N for _ in range(N)]
    for i in range(N):
        d[i][i] = [a[i][k] for k in range(N)]
        for j in range(N):
            if j != i:
                d[i][j] = [-a[i][j] if k == i else mpc(0) for k in range(N)]
    return H, d


def test_exact_solution_has_zero_residuals():
    H, d = synthetic_solution(random.Random(6))
    rep = verify_ecliptic(Partials(None, mpf(1), d, None), H, UNIT)
    for v in (rep.residual_a, rep.residual_b, rep.residual_c, rep.residual_c_diagonal,
              rep.diagonal_unprojected, rep.unit_norm):
        assert v < mpf(2) ** -120


def test_rotated_partials_are_detected():
    rng = random.Random(7)
    H, d = synthetic_solution(rng)
    # rotate the off-diagonal partials of eta_1 by a random orthogonal 2-plane rotation
    c, s = mpmath.cos(0.3), mpmath.sin(0.3)
    for j in range(1, N):
        v = d[0][j]
        d[0][j] = [c * v[k] - s * v[(k + 1) % N] for k in range(N)]
    rep = verify_ecliptic(Partials(None, mpf(1), d, None), H, UNIT)
    assert rep.worst() > mpf(10) ** -3
    assert rep.entries_c[0][1] > mpf(10) ** -3


def test_radial_diagonal_component_is_projected_out():
    H, d = synthetic_solution(random.Random(8))
    d[2][2] = [x + (1 if k == 2 else 0) * mpf("0.01") for k, x in enumerate(d[2][2])]
    rep = verify_ecliptic(Partials(None, mpf(1), d, None), H, UNIT)
    assert rep.residual_c_diagonal < mpf(2) ** -120
    assert rep.diagonal_unprojected > mpf(10) ** -3


def perm_sample(rng):
    z = [mpc(k, rng.uniform(-0.1, 0.1)) for k in range(N)]
    t = [rand_c(rng) for _ in range(N)]
    H = [[rand_c(rng) for _ in range(N)] for _ in range(N)]
    return Sample(z, t, H)


def test_matching_reorders_and_fixes_signs():
    rng = random.Random(9)
    base = perm_sample(rng)
    perm = [3, 0, 7, 1, 2, 6, 5, 4]  # sample index k holds base branch perm[k]
    z = [base.z[p] + mpf(10) ** -6 for p in perm]
    t = [base.t[p] for p in perm]
    H = [[base.H[r][p] * (-1 if p % 2 else 1) for p in perm] for r in range(N)]
    out = match_sample(base, Sample(z, t, H))
    assert out.t == base.t
    for r in range(N):
        for i in range(N):
            assert abs(out.H[r][i] - base.H[r][i]) < mpf(2) ** -100


def test_far_move_is_a_collision():
    rng = random.Random(10)
    base = perm_sample(rng)
    z = list(base.z)
    z[4] = z[4] + mpf("0.3")  # more than a quarter of the unit spacing
    with pytest.raises(BranchCollision):
        match_sample(base, Sample(z, base.t, base.H))


def test_scrambled_column_is_sign_ambiguous():
    rng = random.Random(11)
    base = perm_sample(rng)
    H = [row[:] for row in base.H]
    for r in range(N):
        H[r][5] = rand_c(rng)
    with pytest.raises(SignAmbiguous):
        match_sample(base, Sample(base.z, base.t, H))


def test_random_directions_are_distinct():
    ds = random_directions(42)
    assert len(ds) == 8
    assert len({(d.point, tuple(bool(v) for v in d.vector)) for d in ds}) == 8
    assert all(5 <= d.point <= 8 for d in ds)
    assert random_directions(42) == ds


def test_j_value():
    assert j_value(mpf(1), mpf(0)) == 1728
    assert j_value(mpf(0), mpf(1)) == 0


def test_reference_sample_small_displacement(reference, result256):
    base = sample_configuration(reference, 256)
    assert all(abs(a - b.t.mid) < mpf(10) ** -60 for a, b in zip(base.z, result256.branches))
    delta = Fraction(1, 2 ** 20)
    moved = sample_configuration(reference.moved(4, (1, 0, 0), delta), 256)
    m = match_sample(base, moved, "Q5")
    # displacement is first order in the step, relative to the size of the branch point
    dz = max(abs(a - b) / max(1, abs(b)) for a, b in zip(m.z, base.z))
    assert 0 < dz < 10 ** 3 * float(delta)
    dH = max(abs(m.H[r][i] - base.H[r][i]) for r in range(N) for i in range(N))
    assert 0 < dH < 10 ** 4 * float(delta)


def test_unit_step_is_rejected(reference):
    with pytest.raises(PipelineError):
        track_family(reference, [FamilyDirection(5, (1, 0, 0))] * 8, delta=Fraction(1), precision_bits=128)
