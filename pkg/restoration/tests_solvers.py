import math

import numpy as np
from django.test import SimpleTestCase

from restoration.core import DenseMap, Preconditioner
from restoration.exceptions import ArgumentError, ConfigError, DivergenceError
from restoration.solvers import (
    Algorithm,
    Contraction,
    IterState,
    Problem,
    ProxTerm,
    Schedule,
    ScheduleRole,
    SmoothTerm,
    SolverConfig,
    ThetaMode,
    fb_map,
    fixed_point_residual,
    lasso_kkt_residual,
    ns_fbsa_step,
    parse_schedule,
    run_solver,
    solve_reference,
    step_apfbnsm,
    step_classical,
    step_lorenz_pock,
    step_new,
    validate_config,
)
from restoration.solvers.presets import get_preset
from restoration.solvers.solver_router import FB_EVALUATIONS, pick_step

THETA, ALPHA, BETA, LAMBDA = ScheduleRole.THETA, ScheduleRole.ALPHA, ScheduleRole.BETA, ScheduleRole.LAMBDA


def lasso_1d(b=2.0, rho=1.0, a=1.0) -> Problem:
    return Problem(SmoothTerm(DenseMap([[a]]), [b], max(a * a, 1.0)), ProxTerm(rho))


def pure_prox_1d(rho=1.0) -> Problem:
    # A = 0, b = 0: the gradient vanishes everywhere
    return Problem(SmoothTerm(DenseMap([[0.0]]), [0.0], 1.0), ProxTerm(rho))


def cfg_1d(algorithm, **kwargs) -> SolverConfig:
    kwargs.setdefault("lam", 1.0)
    kwargs.setdefault("preconditioner", Preconditioner.identity(1))
    return SolverConfig(algorithm=algorithm, **kwargs)


def state(prev, curr) -> IterState:
    return IterState(np.array([prev], dtype=float), np.array([curr], dtype=float))


def random_lasso(rng, d: int, rho: float) -> Problem:
    m = math.ceil(0.8 * d)
    A = rng.standard_normal((m, d)) / math.sqrt(m)
    truth = np.zeros(d)
    support = rng.choice(d, size=max(1, d // 5), replace=False)
    truth[support] = rng.standard_normal(support.size)
    b = A @ truth + 1e-3 * rng.standard_normal(m)
    return Problem(SmoothTerm.from_map(DenseMap(A), b), ProxTerm(rho))


class ScheduleTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(Schedule.constant(0.5, ALPHA)(7), 0.5)
        self.assertEqual(Schedule.harmonic(0.1, BETA)(10), 0.01)
        self.assertEqual(Schedule.scaled_harmonic(1.0, 3.0, BETA)(1), 0.25)
        s = Schedule.custom([0.3, 0.2, 0.1], THETA)
        self.assertEqual([s(1), s(2), s(3), s(4), s(100)], [0.3, 0.2, 0.1, 0.1, 0.1])

    def test_indexed_from_one(self):
        with self.assertRaises(ArgumentError):
            Schedule.constant(0.5, ALPHA).value(0)

    def test_role_ranges(self):
        with self.assertRaises(ArgumentError):
            Schedule.constant(1.0, THETA)
        with self.assertRaises(ArgumentError):
            Schedule.constant(1.2, ALPHA)
        with self.assertRaises(ArgumentError):
            Schedule.harmonic(2.0, BETA)
        with self.assertRaises(ArgumentError):
            Schedule.constant(0.0, LAMBDA)
        with self.assertRaises(ArgumentError):
            Schedule.custom([0.5, -0.1], BETA)

    def test_parse(self):
        self.assertEqual(parse_schedule("const:0.5", "alpha"), Schedule.constant(0.5, ALPHA))
        self.assertEqual(parse_schedule("0.1", "theta"), Schedule.constant(0.1, THETA))
        self.assertEqual(parse_schedule("harmonic:0.1", "beta")(2), 0.05)
        self.assertEqual(parse_schedule("scaled-harmonic:0.5,1", "beta")(1), 0.25)
        self.assertEqual(parse_schedule("list:0.5,0.25", "alpha")(5), 0.25)
        for bad in ("", "cubic:1", "const:x", "harmonic:0.1,2"):
            with self.assertRaises(ArgumentError):
                parse_schedule(bad, "beta")

    def test_asymptotics(self):
        h = Schedule.harmonic(0.1, BETA)
        self.assertEqual(h.limit(), 0.0)
        self.assertTrue(h.sum_diverges())
        self.assertEqual(h.bounds(), (0.0, 0.1, False))
        self.assertFalse(Schedule.custom([0.5, 0.0], BETA).sum_diverges())
        self.assertTrue(Schedule.custom([0.5, 0.0], THETA).is_eventually_zero())
        self.assertFalse(Schedule.constant(0.1, THETA).is_eventually_zero())


class ValidateConfigTests(SimpleTestCase):
    def bench_cfg(self, **kwargs):
        values = dict(
            algorithm=Algorithm.NEW,
            lam=0.99,
            theta=Schedule.constant(0.1, THETA),
            alpha=Schedule.constant(0.5, ALPHA),
            beta=Schedule.harmonic(0.1, BETA),
            contraction=Contraction(0.99),
        )
        values.update(kwargs)
        return SolverConfig(**values)

    def test_restoration_parameters_ok_with_inertia_warning(self):
        with self.assertLogs("restoration.solvers.config", level="WARNING") as logs:
            report = validate_config(self.bench_cfg())
        self.assertEqual(len(report.warnings), 1)
        self.assertIn("theta_n", report.warnings[0])
        self.assertIn("[SolverConfig]", logs.output[0])
        self.assertTrue(report.notes)

    def test_constant_beta_warns_on_limit(self):
        report = validate_config(self.bench_cfg(beta=Schedule.constant(0.5, BETA)))
        self.assertTrue(any("does not tend to 0" in w for w in report.warnings))
        self.assertFalse(any("summable" in w for w in report.warnings))

    def test_alpha_one_rejected(self):
        with self.assertRaises(ConfigError):
            validate_config(self.bench_cfg(alpha=Schedule.constant(1.0, ALPHA)))

    def test_alpha_harmonic_rejected_for_new(self):
        with self.assertRaises(ConfigError):
            validate_config(self.bench_cfg(alpha=Schedule.harmonic(0.5, ALPHA)))

    def test_lambda_bounds(self):
        for lam in (0.0, -1.0, 1.5, float("nan")):
            with self.assertRaises(ConfigError):
                validate_config(self.bench_cfg(lam=lam))
        with self.assertRaises(ConfigError):
            validate_config(SolverConfig(algorithm=Algorithm.FBS, lam=2.0))
        validate_config(SolverConfig(algorithm=Algorithm.FBS, lam=1.9))

    def test_lambda_schedule_only_for_varying_algorithms(self):
        schedule = Schedule.custom([1.5, 1.0], LAMBDA)
        validate_config(SolverConfig(algorithm=Algorithm.LORENZ_POCK, lam_schedule=schedule))
        with self.assertRaises(ConfigError):
            validate_config(self.bench_cfg(lam_schedule=schedule))
        with self.assertRaises(ConfigError):
            validate_config(
                SolverConfig(algorithm=Algorithm.FBS, lam_schedule=Schedule.constant(2.5, LAMBDA))
            )

    def test_every_error_reported_together(self):
        with self.assertRaises(ConfigError) as cm:
            validate_config(self.bench_cfg(lam=3.0, alpha=Schedule.constant(1.0, ALPHA), max_iters=-1))
        message = str(cm.exception)
        self.assertIn("lambda", message)
        self.assertIn("alpha_n", message)
        self.assertIn("max_iters", message)

    def test_adaptive_theta_silences_warning(self):
        report = validate_config(self.bench_cfg(theta_mode=ThetaMode.ADAPTIVE))
        self.assertFalse(any("theta_n" in w for w in report.warnings))

    def test_adaptive_theta_value(self):
        cfg = self.bench_cfg(theta_mode="adaptive", theta_adaptive_c=1.0)
        M = Preconditioner.identity(1)
        # c / (n^2 ||x_n - x_n-1||) = 1 / (100 * 2) < 0.1
        self.assertAlmostEqual(cfg.theta_at(10, np.array([3.0]), np.array([1.0]), M), 0.005)
        self.assertEqual(cfg.theta_at(1, np.array([1.0]), np.array([1.0]), M), 0.1)


class StepTests(SimpleTestCase):
    def test_fbs_one_dimensional_lasso(self):
        out = step_classical(state(0.0, 0.0), 1, cfg_1d(Algorithm.FBS), lasso_1d())
        np.testing.assert_array_equal(out, [1.0])

    def test_moudafi_oliny_without_inertia_matches_fbs(self):
        problem = lasso_1d()
        st = state(0.3, 2.7)
        fbs = step_classical(st, 1, cfg_1d(Algorithm.FBS), problem)
        mo = step_classical(st, 1, cfg_1d(Algorithm.MOUDAFI_OLINY), problem)
        np.testing.assert_array_equal(fbs, mo)

    def test_moudafi_oliny_gradient_at_current_point(self):
        cfg = cfg_1d(Algorithm.MOUDAFI_OLINY, theta=Schedule.constant(0.5, THETA))
        np.testing.assert_array_equal(step_classical(state(0.0, 1.0), 1, cfg, lasso_1d()), [1.5])

    def test_lorenz_pock(self):
        cfg = cfg_1d(Algorithm.LORENZ_POCK, theta=Schedule.constant(0.5, THETA))
        np.testing.assert_array_equal(step_lorenz_pock(state(0.0, 1.0), 1, cfg, lasso_1d()), [1.0])
        np.testing.assert_array_equal(step_lorenz_pock(state(2.0, 4.0), 1, cfg, pure_prox_1d()), [4.0])

    def test_apfbnsm(self):
        cfg = cfg_1d(Algorithm.APFBNSM, alpha=Schedule.constant(0.5, ALPHA))
        np.testing.assert_array_equal(step_apfbnsm(state(4.0, 4.0), 1, cfg, pure_prox_1d()), [2.5])

    def test_apfbnsm_alpha_zero_is_plain_fb(self):
        cfg = cfg_1d(Algorithm.APFBNSM, alpha=Schedule.constant(0.0, ALPHA))
        problem = pure_prox_1d()
        np.testing.assert_array_equal(
            step_apfbnsm(state(4.0, 4.0), 1, cfg, problem),
            fb_map(np.array([4.0]), 1.0, Preconditioner.identity(1), problem.smooth, problem.prox),
        )

    def test_new(self):
        cfg = cfg_1d(
            Algorithm.NEW,
            alpha=Schedule.constant(0.5, ALPHA),
            beta=Schedule.constant(0.5, BETA),
            contraction=Contraction(0.9),
        )
        out = step_new(state(4.0, 4.0), 1, cfg, pure_prox_1d())
        self.assertAlmostEqual(float(out[0]), 1.875, places=12)

    def test_new_fixes_the_solution(self):
        cfg = cfg_1d(
            Algorithm.NEW,
            theta=Schedule.constant(0.1, THETA),
            alpha=Schedule.constant(0.5, ALPHA),
            beta=Schedule.constant(0.3, BETA),
            contraction=Contraction(0.0, anchor=[1.0]),
        )
        np.testing.assert_allclose(step_new(state(1.0, 1.0), 3, cfg, lasso_1d()), [1.0], atol=1e-15)

    def test_wrong_algorithm_tag(self):
        with self.assertRaises(ArgumentError):
            step_new(state(0.0, 0.0), 1, cfg_1d(Algorithm.FBS), lasso_1d())
        with self.assertRaises(ArgumentError):
            step_classical(state(0.0, 0.0), 1, cfg_1d(Algorithm.LORENZ_POCK), lasso_1d())

    def test_router(self):
        self.assertIs(pick_step("prox-grad"), step_classical)
        self.assertIs(pick_step(Algorithm.NEW), step_new)
        self.assertEqual(FB_EVALUATIONS[Algorithm.NEW], 3)
        with self.assertRaises(ArgumentError):
            pick_step("fista")


class DegenerationIdentityTests(SimpleTestCase):
    """Bitwise identities on 100 seeded random states."""

    def setUp(self):
        self.rng = np.random.default_rng(77)

    def _random_case(self):
        d = int(self.rng.integers(1, 9))
        A = self.rng.standard_normal((int(self.rng.integers(1, 9)), d))
        problem = Problem(
            SmoothTerm(DenseMap(A), self.rng.standard_normal(A.shape[0]), float(np.linalg.norm(A, 2) ** 2) + 1.0),
            ProxTerm(float(self.rng.uniform(0.0, 1.0))),
        )
        st = IterState(*self.rng.standard_normal((2, d)))
        return problem, st, Preconditioner.identity(d), float(self.rng.uniform(0.05, 1.0))

    def test_lorenz_pock_without_inertia_is_fbs(self):
        for n in range(1, 101):
            problem, st, M, lam = self._random_case()
            lp = cfg_1d(Algorithm.LORENZ_POCK, lam=lam, preconditioner=M)
            fbs = cfg_1d(Algorithm.FBS, lam=lam, preconditioner=M)
            np.testing.assert_array_equal(
                step_lorenz_pock(st, n, lp, problem), step_classical(st, n, fbs, problem)
            )

    def test_apfbnsm_without_inertia_is_normal_s_iteration(self):
        for n in range(1, 101):
            problem, st, M, lam = self._random_case()
            alpha = float(self.rng.uniform(0.05, 0.95))
            cfg = cfg_1d(Algorithm.APFBNSM, lam=lam, preconditioner=M, alpha=Schedule.constant(alpha, ALPHA))
            np.testing.assert_array_equal(
                step_apfbnsm(st, n, cfg, problem), ns_fbsa_step(st.x_curr, alpha, lam, problem)
            )

    def test_new_with_zero_beta_is_fb_after_apfbnsm(self):
        for n in range(1, 101):
            problem, st, M, lam = self._random_case()
            theta = Schedule.constant(float(self.rng.uniform(0.0, 0.9)), THETA)
            alpha = Schedule.constant(float(self.rng.uniform(0.05, 0.95)), ALPHA)
            new = cfg_1d(Algorithm.NEW, lam=lam, preconditioner=M, theta=theta, alpha=alpha,
                         beta=Schedule.constant(0.0, BETA))
            ap = cfg_1d(Algorithm.APFBNSM, lam=lam, preconditioner=M, theta=theta, alpha=alpha)
            expected = fb_map(step_apfbnsm(st, n, ap, problem), lam, M, problem.smooth, problem.prox)
            np.testing.assert_array_equal(step_new(st, n, new, problem), expected)


class RunSolverTests(SimpleTestCase):
    def restoration_cfg(self, **kwargs):
        values = dict(
            algorithm=Algorithm.NEW,
            lam=0.99,
            theta=Schedule.constant(0.1, THETA),
            alpha=Schedule.constant(0.5, ALPHA),
            beta=Schedule.harmonic(0.1, BETA),
            contraction=Contraction(0.99),
            max_iters=5000,
        )
        values.update(kwargs)
        return SolverConfig(**values)

    def test_closed_form_one_dimensional_lasso(self):
        problem = lasso_1d(b=2.0, rho=0.5)
        result = run_solver(problem, self.restoration_cfg(), x0=[0.0], x1=[0.0])
        self.assertLessEqual(abs(float(result.x_final[0]) - 1.5), 1e-3)
        self.assertLessEqual(result.iterations, 5000)

    def test_zero_iterations_returns_start(self):
        result = run_solver(lasso_1d(), self.restoration_cfg(max_iters=0), x0=[0.2], x1=[0.7])
        np.testing.assert_array_equal(result.x_final, [0.7])
        self.assertEqual(len(result.trace.records), 0)
        self.assertIsNone(result.trace.final)

    def test_bad_lambda_fails_before_iterating(self):
        calls = []
        with self.assertRaises(ConfigError):
            run_solver(lasso_1d(), self.restoration_cfg(lam=1.5), x0=[0.0],
                       callbacks=[lambda n, x: calls.append(n)])
        self.assertEqual(calls, [])

    def test_trace_records_and_header(self):
        cfg = self.restoration_cfg(max_iters=20, stop_tol=0.0)
        result = run_solver(
            lasso_1d(), cfg, x0=[0.0], callbacks=[lambda n, x: {"snr_db": float(n)}], metadata={"seed": 42}
        )
        records = result.trace.records
        self.assertEqual([r.n for r in records], list(range(1, 21)))
        self.assertEqual(result.trace.at(5).snr_db, 5.0)
        header = result.trace.header
        self.assertEqual(header["lipschitz"], 1.0)
        self.assertEqual(header["config"]["algorithm"], "new")
        self.assertEqual(header["preconditioner"], "scalar")
        self.assertEqual(header["fb_evaluations_per_iteration"], 3)
        self.assertEqual(header["seed"], 42)
        with self.assertRaises(ArgumentError):
            result.trace.at(21)

    def test_stop_tol_ends_early(self):
        cfg = SolverConfig(algorithm=Algorithm.FBS, lam=1.0, max_iters=1000, stop_tol=1e-10)
        result = run_solver(lasso_1d(), cfg, x0=[0.0])
        # the 1-D forward-backward map reaches the solution in one step
        self.assertEqual(result.iterations, 1)
        self.assertEqual(result.trace.final.residual_m_norm, 0.0)

    def test_divergence_names_iteration(self):
        problem = Problem(SmoothTerm(DenseMap([[10.0]]), [1.0], 100.0), ProxTerm(0.0))
        cfg = SolverConfig(
            algorithm=Algorithm.FBS, lam=1.0, max_iters=10_000, preconditioner=Preconditioner([1e-3])
        )
        with np.errstate(over="ignore", invalid="ignore"):
            with self.assertRaises(DivergenceError) as cm:
                run_solver(problem, cfg, x0=[1.0])
        self.assertGreater(cm.exception.iteration, 1)
        self.assertIn(f"iteration {cm.exception.iteration}", str(cm.exception))
        self.assertIn("non-finite", str(cm.exception))

    def test_residual_uses_lambda_of_the_iteration(self):
        schedule = Schedule.custom([0.5, 1.5], LAMBDA)
        cfg = cfg_1d(Algorithm.LORENZ_POCK, lam_schedule=schedule, max_iters=4, stop_tol=0.0)
        problem = lasso_1d()
        iterates = {}

        def keep(n, x):
            iterates[n] = x.copy()

        result = run_solver(problem, cfg, x0=[0.0], callbacks=[keep])
        # x_1 = soft(0 + 0.5 * 2, 0.5) = 0.5, then soft(1.25, 0.5) - 0.5 = 0.25
        self.assertAlmostEqual(result.trace.at(1).residual_m_norm, 0.25)
        M = Preconditioner.identity(1)
        for record in result.trace.records:
            expected = fixed_point_residual(
                iterates[record.n], schedule.value(record.n), M, problem.smooth, problem.prox
            )
            self.assertAlmostEqual(record.residual_m_norm, expected)

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            run_solver(lasso_1d(), self.restoration_cfg(), x0=[0.0, 1.0])

    def test_objective_trend_on_lasso(self):
        rng = np.random.default_rng(5)
        problem = random_lasso(rng, 30, 0.05)
        x0 = np.zeros(30)
        result = run_solver(problem, self.restoration_cfg(max_iters=500), x0=x0)
        self.assertLessEqual(result.trace.final.objective, result.trace.records[0].objective)
        self.assertLessEqual(result.trace.final.objective, problem.objective(x0))


class DiagnosticsTests(SimpleTestCase):
    def test_fixed_point_residual(self):
        problem = lasso_1d()
        M = Preconditioner.identity(1)
        h, g = problem.smooth, problem.prox
        self.assertLessEqual(fixed_point_residual(np.array([1.0]), 1.0, M, h, g), 1e-12)
        self.assertGreater(fixed_point_residual(np.array([100.0]), 1.0, M, h, g), 0.0)
        x = np.array([0.5, -3.0])
        unconstrained = SmoothTerm(DenseMap.diagonal([1.0, 1.0]), x, 1.0)
        self.assertEqual(fixed_point_residual(x, 1.0, Preconditioner.identity(2), unconstrained, ProxTerm(0.0)), 0.0)

    def test_kkt_residual(self):
        b = np.array([2.0, -0.3, 0.7, -5.0])
        h = SmoothTerm(DenseMap.diagonal(np.ones(4)), b, 1.0)
        x = np.sign(b) * np.maximum(np.abs(b) - 0.5, 0.0)
        self.assertLessEqual(lasso_kkt_residual(x, h, 0.5), 1e-12)
        self.assertEqual(lasso_kkt_residual(np.zeros(4), h, 5.0), 0.0)
        self.assertAlmostEqual(lasso_kkt_residual(np.zeros(4), h, 4.7), 0.3, places=12)
        with self.assertRaises(ArgumentError):
            lasso_kkt_residual(x, h, -1.0)

    def test_fixed_point_and_kkt_agree_on_random_lasso(self):
        rng = np.random.default_rng(2025)
        for _ in range(50):
            d = int(rng.integers(2, 21))
            problem = random_lasso(rng, d, 0.1)
            h = problem.smooth
            M = Preconditioner.scalar(h.lipschitz, d)
            x, _ = solve_reference(problem)
            self.assertLessEqual(fixed_point_residual(x, 1.0, M, h, problem.prox), 1e-8)
            self.assertLessEqual(lasso_kkt_residual(x, h, 0.1), 1e-6)
            moved = x + 1e-2
            self.assertGreater(fixed_point_residual(moved, 1.0, M, h, problem.prox), 1e-8)
            self.assertGreater(lasso_kkt_residual(moved, h, 0.1), 1e-6)


class PresetTests(SimpleTestCase):
    def test_known_presets(self):
        cam = get_preset("Cameraman")
        self.assertEqual((cam.theta, cam.beta, cam.contraction), ("const:0.1", "harmonic:0.1", 0.99))
        self.assertIn("rho", get_preset("mountain").note)
        self.assertIsNone(get_preset(None))

    def test_unknown_preset(self):
        with self.assertRaises(ArgumentError):
            get_preset("lena")
