"""Model family evaluation, inversion and asymptote behaviour."""

import math

import numpy as np
import pytest

from anchorlife.errors import ModelDomainError
from anchorlife.models import (
    LogarithmicParams,
    ModelKind,
    PowellEyringParams,
    PowerLawParams,
    RateTheoryParams,
    SigmoidParams,
    asymptote,
    eval_model,
    inverse_time,
    make_params,
)

SIG = SigmoidParams(kappa_inf=0.4, b=1.0, c=1.0)  # kappa_0 defaults to 1


class TestEval:
    def test_sigmoid_at_zero_returns_instantaneous_level(self):
        assert eval_model(SIG, 0.0) == 1.0

    def test_sigmoid_closed_form_point(self):
        # 0.4 + 0.6 * (1/(1+1))^1
        assert eval_model(SIG, 1.0) == pytest.approx(0.7, abs=1e-15)

    def test_powell_eyring_reference_point(self):
        p = PowellEyringParams(kappa_inf=0.5, b=1.0)
        # 0.5 + 0.5*asinh(1)/1, cross-checked against math.asinh
        assert eval_model(p, 1.0) == pytest.approx(0.9406867935097716, rel=1e-14)
        assert eval_model(p, 0.0) == 1.0  # asinh(x)/x -> 1

    def test_rate_theory_reference_point(self):
        p = RateTheoryParams(kappa_inf=0.5, b=1.0, c=1.0, n=-1.0)
        # 0.5 + asinh(0.1)
        assert eval_model(p, 10.0) == pytest.approx(0.5998340788992076, rel=1e-14)

    @pytest.mark.parametrize(
        "params",
        [
            LogarithmicParams(a=-0.1, b=0.9),
            PowerLawParams(b=0.9, n=-0.05),
            RateTheoryParams(kappa_inf=0.4, b=1.0, c=1.0, n=-0.5),
        ],
    )
    def test_divergent_families_reject_t_zero(self, params):
        with pytest.raises(ModelDomainError):
            eval_model(params, 0.0)

    def test_negative_time_rejected(self):
        with pytest.raises(ModelDomainError):
            eval_model(SIG, -1.0)

    def test_array_evaluation_matches_scalars(self):
        t = np.array([0.0, 0.5, 3.0, 2000.0])
        arr = eval_model(SIG, t)
        assert arr.shape == t.shape
        for tv, yv in zip(t, arr):
            assert eval_model(SIG, float(tv)) == yv


class TestInverse:
    def test_logarithmic_analytic(self):
        p = LogarithmicParams(a=-0.1, b=0.9)
        assert inverse_time(p, 0.8) == pytest.approx(math.e, rel=1e-12)

    def test_sigmoid_analytic(self):
        assert inverse_time(SIG, 0.7) == pytest.approx(1.0, rel=1e-12)

    def test_powell_eyring_root_found(self):
        p = PowellEyringParams(kappa_inf=0.5, b=1.0)
        y = eval_model(p, 1.0)
        assert inverse_time(p, y) == pytest.approx(1.0, abs=1e-9)

    def test_power_law_analytic(self):
        p = PowerLawParams(b=0.9, n=-0.1)
        t = inverse_time(p, 0.5)
        assert eval_model(p, t) == pytest.approx(0.5, rel=1e-12)

    def test_rate_theory_analytic(self):
        p = RateTheoryParams(kappa_inf=0.3, b=0.01, c=2.0, n=-0.3)
        t = inverse_time(p, 0.5)
        assert eval_model(p, t) == pytest.approx(0.5, rel=1e-12)

    @pytest.mark.parametrize("y", [0.39, 0.4, 1.0, 1.2])
    def test_out_of_range_rejected(self, y):
        with pytest.raises(ModelDomainError):
            inverse_time(SIG, y)


class TestAsymptote:
    def test_sigmoid_long_time_is_kappa_inf(self):
        p = SigmoidParams(kappa_inf=0.5986, b=2.0, c=0.3)
        assert asymptote(p, "long_time") == 0.5986
        assert asymptote(p, "short_time") == 1.0

    def test_power_law_long_time_zero(self):
        assert asymptote(PowerLawParams(b=0.8, n=-0.4), "long_time") == 0.0
        assert asymptote(PowerLawParams(b=0.8, n=-0.4), "short_time") == math.inf

    def test_rate_theory_short_time_diverges(self):
        p = RateTheoryParams(kappa_inf=0.2, b=1.0, c=1.0, n=-0.5)
        assert asymptote(p, "short_time") == math.inf
        assert asymptote(p, "long_time") == 0.2

    def test_logarithmic_unbounded_both_ends(self):
        p = LogarithmicParams(a=-0.05, b=1.0)
        assert asymptote(p, "long_time") == -math.inf
        assert asymptote(p, "short_time") == math.inf

    def test_unknown_end_rejected(self):
        with pytest.raises(ModelDomainError):
            asymptote(SIG, "sideways")


class TestValidation:
    def test_logarithmic_requires_negative_slope(self):
        with pytest.raises(ModelDomainError):
            LogarithmicParams(a=0.1, b=0.9)

    def test_power_law_requires_negative_exponent(self):
        with pytest.raises(ModelDomainError):
            PowerLawParams(b=0.9, n=0.1)

    def test_sigmoid_rejects_inverted_asymptotes(self):
        with pytest.raises(ModelDomainError):
            SigmoidParams(kappa_inf=1.0, b=1.0, c=1.0, kappa_0=0.9)

    def test_sigmoid_rejects_excessive_kappa_0(self):
        with pytest.raises(ModelDomainError):
            SigmoidParams(kappa_inf=0.4, b=1.0, c=1.0, kappa_0=1.2)

    def test_sigmoid_accepts_negative_kappa_inf_with_flag(self):
        p = SigmoidParams(kappa_inf=-0.3, b=1.0, c=0.1)
        assert p.nonphysical_warnings()
        assert "non-physical" in p.nonphysical_warnings()[0]
        assert SigmoidParams(kappa_inf=0.4, b=1.0, c=1.0).nonphysical_warnings() == ()

    def test_rate_theory_kappa_inf_range(self):
        with pytest.raises(ModelDomainError):
            RateTheoryParams(kappa_inf=-0.1, b=1.0, c=1.0, n=-1.0)
        with pytest.raises(ModelDomainError):
            RateTheoryParams(kappa_inf=1.0, b=1.0, c=1.0, n=-1.0)

    def test_powell_eyring_kappa_inf_nonnegative(self):
        with pytest.raises(ModelDomainError):
            PowellEyringParams(kappa_inf=-0.1, b=1.0)

    def test_make_params_rejects_unknown_and_missing(self):
        with pytest.raises(ModelDomainError):
            make_params(ModelKind.SIGMOID, {"kappa_inf": 0.4, "b": 1.0, "c": 1.0, "q": 2})
        with pytest.raises(ModelDomainError):
            make_params(ModelKind.SIGMOID, {"kappa_inf": 0.4, "b": 1.0})
        p = make_params(ModelKind.SIGMOID, {"kappa_inf": 0.4, "b": 1.0, "c": 1.0})
        assert p.kappa_0 == 1.0


def _random_params(kind, rng):
    if kind is ModelKind.LOGARITHMIC:
        return LogarithmicParams(a=-(10 ** rng.uniform(-3, 0)), b=rng.uniform(0.5, 1.2))
    if kind is ModelKind.POWER_LAW:
        return PowerLawParams(
            b=rng.uniform(0.3, 1.2), n=-(10 ** rng.uniform(math.log10(0.05), math.log10(2)))
        )
    if kind is ModelKind.SIGMOID:
        ki = rng.uniform(-0.5, 0.8)
        return SigmoidParams(
            kappa_inf=ki,
            b=10 ** rng.uniform(-4, 2),
            c=10 ** rng.uniform(math.log10(0.05), math.log10(2)),
            kappa_0=rng.uniform(ki + 0.1, 1.05),
        )
    if kind is ModelKind.RATE_THEORY:
        return RateTheoryParams(
            kappa_inf=rng.uniform(0.0, 0.9),
            b=10 ** rng.uniform(-4, 2),
            c=10 ** rng.uniform(-2, 2),
            n=-(10 ** rng.uniform(math.log10(0.05), math.log10(2))),
        )
    ki = rng.uniform(0.0, 0.9)
    return PowellEyringParams(
        kappa_inf=ki, b=10 ** rng.uniform(-4, 2), kappa_0=rng.uniform(ki + 0.1, 1.05)
    )


def _inside_attainable(params, y, margin=1e-5):
    lo = asymptote(params, "long_time")
    hi = asymptote(params, "short_time")
    if math.isfinite(lo) and math.isfinite(hi):
        gap = hi - lo
        return lo + margin * gap <= y <= hi - margin * gap
    if math.isfinite(lo):  # rate theory: unbounded short-time end
        return lo + margin <= y <= lo + 5.0
    return True  # logarithmic / power law


class TestProperties:
    @pytest.mark.parametrize("kind", list(ModelKind))
    def test_strictly_decreasing_in_time(self, kind):
        rng = np.random.default_rng(101)
        for _ in range(1000):
            p = _random_params(kind, rng)
            t1 = 10 ** rng.uniform(-3, 4)
            t2 = t1 * 10 ** rng.uniform(0.05, 2)
            assert eval_model(p, t1) > eval_model(p, t2)

    @pytest.mark.parametrize("kind", list(ModelKind))
    def test_eval_inverse_round_trip(self, kind):
        rng = np.random.default_rng(202)
        tol = 1e-6 if kind is ModelKind.POWELL_EYRING else 1e-9
        done = 0
        while done < 1000:
            p = _random_params(kind, rng)
            t = 10 ** rng.uniform(-3, 6)
            y = eval_model(p, t)
            if not _inside_attainable(p, y):
                continue
            done += 1
            assert inverse_time(p, y) == pytest.approx(t, rel=tol)

    def test_long_time_limit_consistency(self):
        # curve value at 1e12 h within 1e-6 of the long-time asymptote
        # (parameter ranges chosen so the decay has actually completed)
        rng = np.random.default_rng(303)
        for _ in range(300):
            ki = rng.uniform(0.0, 0.8)
            sig = SigmoidParams(
                kappa_inf=ki,
                b=10 ** rng.uniform(-4, 2),
                c=rng.uniform(0.8, 3.0),
                kappa_0=rng.uniform(ki + 0.1, 1.05),
            )
            assert eval_model(sig, 1e12) == pytest.approx(
                asymptote(sig, "long_time"), abs=1e-6
            )
            pe = PowellEyringParams(
                kappa_inf=ki, b=10 ** rng.uniform(-4, 2), kappa_0=rng.uniform(ki + 0.1, 1.05)
            )
            assert eval_model(pe, 1e12) == pytest.approx(
                asymptote(pe, "long_time"), abs=1e-6
            )

    def test_sigmoid_with_zero_floor_stays_in_band(self):
        rng = np.random.default_rng(404)
        for _ in range(500):
            p = SigmoidParams(
                kappa_inf=0.0,
                b=10 ** rng.uniform(-4, 2),
                c=10 ** rng.uniform(-2, 1),
                kappa_0=rng.uniform(0.5, 1.05),
            )
            t = 10 ** rng.uniform(-3, 8)
            y = eval_model(p, t)
            assert 0.0 <= y <= p.kappa_0
