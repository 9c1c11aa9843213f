//! Randomised verification suites over exact-rational states.
//!
//! Every suite draws its states from a ChaCha generator seeded by the configuration, so a report
//! is a deterministic function of its [`VerifyConfig`]. Each check records how many cases it
//! evaluated, how many failed, the largest residual seen and, on failure, one witness.

use std::cell::RefCell;
use std::collections::BTreeSet;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;
use crate::fock::{beta, beta_star, hop, hop_star, inner_product, num_op, random_state, StateFn, Weight};
use crate::hall_littlewood::{elementary_symmetric, phi_waves};
use crate::hamiltonians::{h_def, h_explicit, h_explicit_at, h_explicit_with, v_coeff, Branch, MoveSet};
use crate::qnum::{ExactContext, QContext, Scalar};

type Q = BigRational;
type State = StateFn<Q>;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct VerifyConfig {
    pub n: usize,
    pub q_num: i64,
    pub q_den: i64,
    pub lo: i64,
    pub hi: i64,
    pub seed: u64,
    pub trials: usize,
    pub commutator_trials: usize,
    pub terms: usize,
    pub spectral_points: usize,
    pub weights_per_point: usize,
    /// Replaces `V_{λ,J}` by a wrong value in the closed-form action, to exercise failure reporting.
    pub corrupt_v: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 3,
            q_num: 1,
            q_den: 2,
            lo: -3,
            hi: 3,
            seed: 42,
            trials: 50,
            commutator_trials: 20,
            terms: 6,
            spectral_points: 20,
            weights_per_point: 10,
            corrupt_v: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Plactic,
    FieldAdjointness,
    Oracle,
    Commutativity,
    Adjointness,
    KernelTranslation,
    Pieri,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Algebra,
        Suite::Plactic,
        Suite::FieldAdjointness,
        Suite::Oracle,
        Suite::Commutativity,
        Suite::Adjointness,
        Suite::KernelTranslation,
        Suite::Pieri,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Plactic => "plactic",
            Suite::FieldAdjointness => "field-adjointness",
            Suite::Oracle => "oracle",
            Suite::Commutativity => "commutativity",
            Suite::Adjointness => "adjointness",
            Suite::KernelTranslation => "kernel-translation",
            Suite::Pieri => "pieri",
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckStats {
    pub suite: String,
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub witness: Option<Value>,
}

impl CheckStats {
    fn new(suite: Suite, name: &str) -> Self {
        Self {
            suite: suite.name().into(),
            name: name.into(),
            cases: 0,
            failures: 0,
            max_residual: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, residual: f64, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        self.max_residual = self.max_residual.max(residual);
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn compare(&mut self, lhs: &State, rhs: &State, witness: impl FnOnce() -> Value) {
        let residual = lhs.max_abs_diff(rhs);
        self.record(residual, lhs == rhs, witness);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub config: VerifyConfig,
    pub checks: Vec<CheckStats>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&CheckStats> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn suite_passed(&self, suite: Suite) -> bool {
        self.checks
            .iter()
            .filter(|c| c.suite == suite.name())
            .all(CheckStats::passed)
    }
}

struct Runner<'a> {
    cfg: &'a VerifyConfig,
    ctx: ExactContext,
    rng: ChaCha8Rng,
}

impl Runner<'_> {
    fn state(&mut self, grade: usize) -> State {
        random_state(&mut self.rng, grade, self.cfg.lo, self.cfg.hi, self.cfg.terms)
    }

    fn nonzero_state(&mut self, grade: usize) -> State {
        loop {
            let f = self.state(grade);
            if !f.is_zero() {
                return f;
            }
        }
    }
}

fn witness_state(relation: &str, sites: &[i64], f: &State) -> Value {
    json!({ "relation": relation, "sites": sites, "state": f.to_json() })
}

/// Runs the selected suites.
pub fn run(cfg: &VerifyConfig, suites: &[Suite]) -> Result<VerifyReport> {
    let ctx = QContext::exact(cfg.q_num, cfg.q_den)?;
    let mut checks = Vec::new();
    for &suite in suites {
        let mut runner = Runner {
            cfg,
            ctx: ctx.clone(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(31).wrapping_add(suite.index())),
        };
        checks.extend(match suite {
            Suite::Algebra => algebra(&mut runner),
            Suite::Plactic => plactic(&mut runner),
            Suite::FieldAdjointness => field_adjointness(&mut runner),
            Suite::Oracle => oracle(&mut runner),
            Suite::Commutativity => commutativity(&mut runner),
            Suite::Adjointness => adjointness(&mut runner),
            Suite::KernelTranslation => kernel_translation(&mut runner),
            Suite::Pieri => pieri(&mut runner),
        });
    }
    let passed = checks.iter().all(CheckStats::passed);
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        checks,
        passed,
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run(cfg, &Suite::ALL)
}

fn sites(cfg: &VerifyConfig) -> Vec<i64> {
    (cfg.lo - 1..=cfg.hi + 1).collect()
}

/// `β*_k β_l f`, which vanishes on the vacuum grade because `β_l` maps it to `{0}`.
fn raise_after_lower(ctx: &ExactContext, k: i64, l: i64, f: &State) -> State {
    if f.grade() == 0 {
        StateFn::zero(0)
    } else {
        beta_star(ctx, k, &beta(l, f))
    }
}

fn algebra(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::Algebra;
    let mut distinct = CheckStats::new(s, "distinct-site commutators");
    let mut number_twist = CheckStats::new(s, "number twisting");
    let mut commutator = CheckStats::new(s, "[beta_l, beta*_l] = N_l");
    let mut q_commutator = CheckStats::new(s, "beta_l beta*_l - q beta*_l beta_l = 1");
    let mut bounds = CheckStats::new(s, "norm bounds");
    let ctx = run.ctx.clone();
    let q = ctx.q().clone();
    let bound = Q::one() / (Q::one() - q.clone());
    let sites = sites(run.cfg);
    for trial in 0..run.cfg.trials {
        let grade = trial % (run.cfg.n + 1);
        let f = run.state(grade);
        for &l in &sites {
            for &k in &sites {
                if l == k {
                    continue;
                }
                let b = |site: i64, g: &State| beta(site, g);
                let bs = |site: i64, g: &State| beta_star(&ctx, site, g);
                let nn = |site: i64, g: &State| num_op(&ctx, site, g);
                let pairs: [(&str, State, State); 6] = [
                    ("[b_l, b_k]", b(l, &b(k, &f)), b(k, &b(l, &f))),
                    ("[b*_l, b*_k]", bs(l, &bs(k, &f)), bs(k, &bs(l, &f))),
                    ("[N_l, N_k]", nn(l, &nn(k, &f)), nn(k, &nn(l, &f))),
                    ("[N_l, b_k]", nn(l, &b(k, &f)), b(k, &nn(l, &f))),
                    ("[N_l, b*_k]", nn(l, &bs(k, &f)), bs(k, &nn(l, &f))),
                    ("[b_l, b*_k]", b(l, &bs(k, &f)), raise_after_lower(&ctx, k, l, &f)),
                ];
                for (name, lhs, rhs) in pairs {
                    distinct.compare(&lhs, &rhs, || witness_state(name, &[l, k], &f));
                }
            }
            let lhs = num_op(&ctx, l, &beta_star(&ctx, l, &f));
            let rhs = beta_star(&ctx, l, &num_op(&ctx, l, &f)).scale(&q);
            number_twist.compare(&lhs, &rhs, || witness_state("N_l b*_l = q b*_l N_l", &[l], &f));
            let lhs = beta(l, &num_op(&ctx, l, &f));
            let rhs = num_op(&ctx, l, &beta(l, &f)).scale(&q);
            number_twist.compare(&lhs, &rhs, || witness_state("b_l N_l = q N_l b_l", &[l], &f));
            let up_down = beta(l, &beta_star(&ctx, l, &f));
            let down_up = raise_after_lower(&ctx, l, l, &f);
            commutator.compare(&(&up_down - &down_up), &num_op(&ctx, l, &f), || {
                witness_state("[b_l, b*_l] = N_l", &[l], &f)
            });
            q_commutator.compare(&(&up_down - &down_up.scale(&q)), &f, || {
                witness_state("b_l b*_l - q b*_l b_l = 1", &[l], &f)
            });
            let norm = inner_product(&ctx, &f, &f).expect("same grade");
            let limit = bound.clone() * norm.clone();
            for (name, image) in [
                ("beta", beta(l, &f)),
                ("beta*", beta_star(&ctx, l, &f)),
            ] {
                let value = inner_product(&ctx, &image, &image).expect("same grade");
                let excess = value.clone() - limit.clone();
                let ok = value <= limit;
                bounds.record(if ok { 0.0 } else { excess.magnitude() }, ok, || {
                    witness_state(name, &[l], &f)
                });
            }
            let image = num_op(&ctx, l, &f);
            let value = inner_product(&ctx, &image, &image).expect("same grade");
            let ok = value <= norm;
            bounds.record(0.0, ok, || witness_state("N", &[l], &f));
        }
    }
    vec![distinct, number_twist, commutator, q_commutator, bounds]
}

fn plactic(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::Plactic;
    let mut far = CheckStats::new(s, "far hops commute");
    let mut knuth = CheckStats::new(s, "quantum Knuth relations");
    let mut knuth_star = CheckStats::new(s, "quantum Knuth relations (adjoint)");
    let ctx = run.ctx.clone();
    let q = ctx.q().clone();
    let one_q = Q::one() + q.clone();
    let sites = sites(run.cfg);
    for trial in 0..run.cfg.trials {
        let grade = 1 + trial % run.cfg.n.max(1);
        let f = run.state(grade);
        let a = |l: i64, g: &State| hop(&ctx, l, g);
        let s_ = |l: i64, g: &State| hop_star(&ctx, l, g);
        for &l in &sites {
            for &k in &sites {
                if (l - k).abs() > 1 {
                    far.compare(&a(l, &a(k, &f)), &a(k, &a(l, &f)), || witness_state("a_l a_k", &[l, k], &f));
                    far.compare(&s_(l, &s_(k, &f)), &s_(k, &s_(l, &f)), || {
                        witness_state("a*_l a*_k", &[l, k], &f)
                    });
                }
            }
            let m = l + 1;
            let lhs = &a(m, &a(l, &a(l, &f))) + &a(l, &a(l, &a(m, &f))).scale(&q);
            let rhs = a(l, &a(m, &a(l, &f))).scale(&one_q);
            knuth.compare(&lhs, &rhs, || witness_state("first", &[l], &f));
            let lhs = &a(m, &a(m, &a(l, &f))) + &a(l, &a(m, &a(m, &f))).scale(&q);
            let rhs = a(m, &a(l, &a(m, &f))).scale(&one_q);
            knuth.compare(&lhs, &rhs, || witness_state("second", &[l], &f));
            let lhs = &s_(l, &s_(l, &s_(m, &f))) + &s_(m, &s_(l, &s_(l, &f))).scale(&q);
            let rhs = s_(l, &s_(m, &s_(l, &f))).scale(&one_q);
            knuth_star.compare(&lhs, &rhs, || witness_state("first*", &[l], &f));
            let lhs = &s_(l, &s_(m, &s_(m, &f))) + &s_(m, &s_(m, &s_(l, &f))).scale(&q);
            let rhs = s_(m, &s_(l, &s_(m, &f))).scale(&one_q);
            knuth_star.compare(&lhs, &rhs, || witness_state("second*", &[l], &f));
        }
    }
    vec![far, knuth, knuth_star]
}

fn exact_equal(stats: &mut CheckStats, lhs: Q, rhs: Q, witness: impl FnOnce() -> Value) {
    let residual = (lhs.clone() - rhs.clone()).magnitude();
    stats.record(residual, lhs == rhs, witness);
}

fn field_adjointness(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::FieldAdjointness;
    let mut stats = CheckStats::new(s, "field operator adjoints");
    let ctx = run.ctx.clone();
    let sites = sites(run.cfg);
    for trial in 0..run.cfg.trials {
        let grade = trial % (run.cfg.n + 1);
        let f = run.state(grade);
        let g_up = run.state(grade + 1);
        let g = run.state(grade);
        for &l in &sites {
            let lhs = inner_product(&ctx, &beta_star(&ctx, l, &f), &g_up).unwrap();
            let rhs = inner_product(&ctx, &f, &beta(l, &g_up)).unwrap();
            exact_equal(&mut stats, lhs, rhs, || witness_state("beta*", &[l], &f));
            let lhs = inner_product(&ctx, &num_op(&ctx, l, &f), &g).unwrap();
            let rhs = inner_product(&ctx, &f, &num_op(&ctx, l, &g)).unwrap();
            exact_equal(&mut stats, lhs, rhs, || witness_state("N", &[l], &f));
            let lhs = inner_product(&ctx, &hop(&ctx, l, &f), &g).unwrap();
            let rhs = inner_product(&ctx, &f, &hop_star(&ctx, l, &g)).unwrap();
            exact_equal(&mut stats, lhs, rhs, || witness_state("a", &[l], &f));
        }
    }
    vec![stats]
}

fn corrupted_v(ctx: &ExactContext, lambda: &Weight, set: MoveSet) -> Q {
    let v = v_coeff(ctx, lambda, set);
    if v.is_one() {
        v
    } else {
        v + ctx.q().clone()
    }
}

fn oracle(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::Oracle;
    let mut stats = CheckStats::new(s, "closed form = monomial definition");
    let ctx = run.ctx.clone();
    for n in 1..=run.cfg.n {
        for r in 1..=n {
            for _ in 0..run.cfg.trials {
                let f = run.state(n);
                for branch in [Branch::Lower, Branch::Raise] {
                    let reference = h_def(&ctx, r, &f, branch);
                    let touched: RefCell<Vec<(Weight, MoveSet)>> = RefCell::new(Vec::new());
                    let explicit = if run.cfg.corrupt_v {
                        h_explicit_with(r, &f, branch, |lambda, set| {
                            let bad = corrupted_v(&ctx, lambda, set);
                            if bad != v_coeff(&ctx, lambda, set) {
                                touched.borrow_mut().push((lambda.clone(), set));
                            }
                            bad
                        })
                    } else {
                        h_explicit(&ctx, r, &f, branch)
                    };
                    stats.compare(&explicit, &reference, || {
                        let diff = &explicit - &reference;
                        let bad: BTreeSet<&Weight> = diff.support().collect();
                        let culprit = touched
                            .borrow()
                            .iter()
                            .find(|(lambda, _)| bad.contains(lambda))
                            .map(|(lambda, set)| json!({ "lambda": lambda.parts(), "J": set.indices() }));
                        json!({
                            "n": n,
                            "r": r,
                            "branch": format!("{branch:?}"),
                            "state": f.to_json(),
                            "first_mismatch": diff.support().next().map(|w| w.parts().to_vec()),
                            "witness": culprit,
                        })
                    });
                }
            }
        }
    }
    vec![stats]
}

fn commutativity(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::Commutativity;
    let mut stats = CheckStats::new(s, "hierarchy commutators vanish");
    let ctx = run.ctx.clone();
    let branches = [Branch::Lower, Branch::Raise];
    for n in 1..=run.cfg.n {
        for _ in 0..run.cfg.commutator_trials {
            let f = run.state(n);
            for r in 1..=n {
                for rr in r..=n {
                    for a in branches {
                        for b in branches {
                            let ab = h_explicit(&ctx, r, &h_explicit(&ctx, rr, &f, b), a);
                            let ba = h_explicit(&ctx, rr, &h_explicit(&ctx, r, &f, a), b);
                            stats.compare(&ab, &ba, || {
                                json!({ "r": r, "r_prime": rr, "branches": [format!("{a:?}"), format!("{b:?}")], "state": f.to_json() })
                            });
                        }
                    }
                }
            }
        }
    }
    vec![stats]
}

fn adjointness(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::Adjointness;
    let mut stats = CheckStats::new(s, "<H_r f, g> = <f, H*_r g>");
    let ctx = run.ctx.clone();
    for n in 1..=run.cfg.n {
        for _ in 0..run.cfg.trials {
            let f = run.state(n);
            let g = run.state(n);
            for r in 1..=n {
                let lhs = inner_product(&ctx, &h_explicit(&ctx, r, &f, Branch::Lower), &g).unwrap();
                let rhs = inner_product(&ctx, &f, &h_explicit(&ctx, r, &g, Branch::Raise)).unwrap();
                exact_equal(&mut stats, lhs, rhs, || json!({ "r": r, "f": f.to_json(), "g": g.to_json() }));
            }
        }
    }
    vec![stats]
}

fn kernel_translation(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::KernelTranslation;
    let mut kernel = CheckStats::new(s, "H_r = 0 for r > n");
    let mut translation = CheckStats::new(s, "H_n translates by (1,...,1)");
    let mut complement = CheckStats::new(s, "H*_r = H_{n-r} shifted");
    let ctx = run.ctx.clone();
    for n in 1..=run.cfg.n {
        for _ in 0..run.cfg.trials {
            let f = run.nonzero_state(n);
            for branch in [Branch::Lower, Branch::Raise] {
                let image = h_explicit(&ctx, n + 1, &f, branch);
                kernel.compare(&image, &StateFn::zero(n), || json!({ "state": f.to_json() }));
                let image = h_def(&ctx, n + 1, &f, branch);
                kernel.compare(&image, &StateFn::zero(n), || json!({ "oracle": true, "state": f.to_json() }));
            }
            let up = vec![1; n];
            let down = vec![-1; n];
            let shifted = StateFn::from_pairs(
                n,
                f.iter().map(|(mu, v)| (mu.shifted(&up).expect("uniform shift"), v.clone())),
            )
            .expect("grade preserved");
            translation.compare(&h_explicit(&ctx, n, &f, Branch::Lower), &shifted, || json!({ "state": f.to_json() }));
            for r in 1..n {
                let lower = h_explicit(&ctx, n - r, &f, Branch::Lower);
                let moved = StateFn::from_pairs(
                    n,
                    lower.iter().map(|(mu, v)| (mu.shifted(&down).expect("uniform shift"), v.clone())),
                )
                .expect("grade preserved");
                complement.compare(&h_explicit(&ctx, r, &f, Branch::Raise), &moved, || {
                    json!({ "r": r, "state": f.to_json() })
                });
            }
        }
    }
    vec![kernel, translation, complement]
}

fn random_alcove<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    loop {
        let mut xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-PI..PI)).collect();
        xi.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        if xi.windows(2).all(|p| p[0] - p[1] > 1e-3) {
            return xi;
        }
    }
}

fn pieri(run: &mut Runner) -> Vec<CheckStats> {
    let s = Suite::Pieri;
    let mut lower = CheckStats::new(s, "H_r phi = e_r(e^{-i xi}) phi");
    let mut raise = CheckStats::new(s, "H*_r phi = e_r(e^{i xi}) phi");
    let mut hamiltonian = CheckStats::new(s, "H_q phi = eps phi");
    let ctx = run.ctx.to_float();
    let tol = 1e-9;
    for n in 1..=run.cfg.n {
        for _ in 0..run.cfg.spectral_points {
            let xi = random_alcove(&mut run.rng, n);
            let waves = phi_waves(&ctx, &xi).expect("alcove point");
            let plus: Vec<Complex64> = xi.iter().map(|&x| Complex64::from_polar(1.0, x)).collect();
            let minus: Vec<Complex64> = plus.iter().map(|z| z.conj()).collect();
            let eps = 2.0 * xi.iter().map(|x| x.cos()).sum::<f64>();
            for k in 0..run.cfg.weights_per_point {
                let mut parts: Vec<i64> =
                    (0..n).map(|_| run.rng.gen_range(run.cfg.lo..=run.cfg.hi)).collect();
                if k % 2 == 1 && n > 1 {
                    parts[1] = parts[0];
                }
                let lambda = Weight::from_unsorted(parts);
                let g = |mu: &Weight| waves.eval(mu.parts());
                let value = g(&lambda);
                let scale = 1.0 + value.norm();
                let witness = || json!({ "xi": xi, "lambda": lambda.parts() });
                for r in 1..=n {
                    let res = (h_explicit_at(&ctx, r, Branch::Lower, &lambda, g)
                        - elementary_symmetric(r, &minus) * value)
                        .norm()
                        / scale;
                    lower.record(res, res < tol, witness);
                    let res = (h_explicit_at(&ctx, r, Branch::Raise, &lambda, g)
                        - elementary_symmetric(r, &plus) * value)
                        .norm()
                        / scale;
                    raise.record(res, res < tol, witness);
                }
                let hq = h_explicit_at(&ctx, 1, Branch::Lower, &lambda, g)
                    + h_explicit_at(&ctx, 1, Branch::Raise, &lambda, g);
                let res = (hq - eps * value).norm() / scale;
                hamiltonian.record(res, res < tol, witness);
            }
        }
    }
    vec![lower, raise, hamiltonian]
}
