//! Exhaustive sweeps over every input up to a size bound: the two
//! vexillarity tests, the cofactor and minor tables, the witness
//! construction and the `Gr2` suites.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gr2::{verify_gr2, Gr2Config};
use crate::linalg::{minor_grad, ratio, IndexedMinor, Rational};
use crate::perm::{is_vexillary_pattern, is_vexillary_restriction, Gr2Params};
use crate::witness::{
    build_sigma_hat, certify_nonminimal, cofactor_matrix, default_parameters, minor_case, minor_class,
};
use crate::{PartialPermutation, Permutation};

/// Random parameter triples per permutation in the table sweeps.
pub const TABLE_TRIPLES: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct SelfcheckConfig {
    pub max_size: usize,
    pub seed: u64,
    /// Regular points per `Gr2` shape.
    pub gr2_samples: usize,
}

impl Default for SelfcheckConfig {
    fn default() -> Self {
        SelfcheckConfig { max_size: 3, seed: 0, gr2_samples: 20 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfcheckReport {
    pub config: SelfcheckConfig,
    pub suites: Vec<SuiteResult>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

pub fn run(config: &SelfcheckConfig) -> SelfcheckReport {
    let k = config.max_size;
    let inputs = all_partial_permutations(k);
    SelfcheckReport {
        config: config.clone(),
        suites: vec![
            vexillary_equivalence(&inputs),
            cofactor_tables(k, config.seed),
            minor_tables(k, config.seed),
            witness_sweep(&inputs),
            gr2_suites(k, config),
        ],
    }
}

/// Every partial permutation with `1 <= m, n <= k`.
pub fn all_partial_permutations(k: usize) -> Vec<PartialPermutation> {
    (1..=k).flat_map(|m| (1..=k).flat_map(move |n| PartialPermutation::enumerate(m, n))).collect()
}

/// The non-identity permutations of sizes `2..=k`.
pub fn non_identity_permutations(k: usize) -> Vec<Permutation> {
    (2..=k).flat_map(Permutation::all).filter(|s| !s.is_identity()).collect()
}

/// Nonzero `p/q` with `|p| <= 9`, `1 <= q <= 7`.
pub fn random_parameters(rng: &mut ChaCha8Rng) -> [Rational; 3] {
    let mut draw = || loop {
        let p: i64 = rng.gen_range(-9..=9);
        if p != 0 {
            return ratio(p, rng.gen_range(1..=7));
        }
    };
    [draw(), draw(), draw()]
}

/// The parameter stream for the `index`-th permutation of a table sweep.
pub fn table_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn vexillary_equivalence(inputs: &[PartialPermutation]) -> SuiteResult {
    let mut r = SuiteResult::new("vexillary_equivalence");
    for w in inputs {
        r.cases += 1;
        let (pattern, restriction) = (is_vexillary_pattern(w), is_vexillary_restriction(w));
        if pattern != restriction {
            r.failures.push(format!("{}: pattern={pattern} restriction={restriction}", w.to_inline()));
        }
    }
    r
}

/// Closed-form cofactors against the gradient of the full determinant.
pub fn cofactor_tables(k: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("cofactor_table");
    for (i, s) in non_identity_permutations(k).iter().enumerate() {
        let mut rng = table_rng(seed, i as u64);
        for t in 0..TABLE_TRIPLES {
            r.cases += 1;
            let y = random_parameters(&mut rng);
            let sh = match build_sigma_hat(s, &y) {
                Ok(sh) => sh,
                Err(e) => {
                    r.failures.push(format!("sigma={s} seed={seed} stream={i} triple={t}: {e}"));
                    continue;
                }
            };
            let all: Vec<usize> = (1..=sh.size()).collect();
            let full = IndexedMinor::new(all.clone(), all).expect("full index set");
            match minor_grad(&sh.matrix, &full) {
                Ok(g) if g == cofactor_matrix(&sh) => {}
                Ok(_) => {
                    r.failures.push(format!("sigma={s} seed={seed} stream={i} triple={t}: table differs"))
                }
                Err(e) => r.failures.push(format!("sigma={s} seed={seed} stream={i} triple={t}: {e}")),
            }
        }
    }
    r
}

/// Every complementary minor of `sigma_hat` against the five case families.
pub fn minor_tables(k: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("minor_table");
    for (i, s) in non_identity_permutations(k).iter().enumerate() {
        let mut rng = table_rng(seed, i as u64);
        for t in 0..TABLE_TRIPLES {
            r.cases += 1;
            let y = random_parameters(&mut rng);
            let Ok(sh) = build_sigma_hat(s, &y) else {
                r.failures.push(format!("sigma={s} seed={seed} stream={i} triple={t}: construction"));
                continue;
            };
            let n1 = sh.size();
            let pairs: Vec<(usize, usize)> =
                (1..=n1).flat_map(|a| (a + 1..=n1).map(move |b| (a, b))).collect();
            for &rows in &pairs {
                for &cols in &pairs {
                    let exact = match minor_class(&sh, rows, cols) {
                        Ok(v) => v,
                        Err(e) => {
                            r.failures.push(format!("sigma={s} rows={rows:?} cols={cols:?}: {e}"));
                            continue;
                        }
                    };
                    let ok = match minor_case(&sh, rows, cols) {
                        Some(case) => exact.abs() == case.magnitude,
                        None => exact.is_zero(),
                    };
                    if !ok {
                        r.failures.push(format!(
                            "sigma={s} seed={seed} stream={i} triple={t} rows={rows:?} cols={cols:?}: {exact}"
                        ));
                    }
                }
            }
        }
    }
    r
}

/// Certificates for every non-vexillary input at the default parameters.
pub fn witness_sweep(inputs: &[PartialPermutation]) -> SuiteResult {
    let mut r = SuiteResult::new("witness");
    let y = default_parameters();
    for w in inputs.iter().filter(|w| !is_vexillary_pattern(w)) {
        r.cases += 1;
        match certify_nonminimal(w, &y) {
            Ok(cert) if cert.checks.all() => {}
            Ok(cert) => r.failures.push(format!("{}: {:?}", w.to_inline(), cert.violations)),
            Err(e) => r.failures.push(format!("{}: {e}", w.to_inline())),
        }
    }
    r
}

/// The full `Gr2` suite for every shape up to `k x k`.
pub fn gr2_suites(k: usize, config: &SelfcheckConfig) -> SuiteResult {
    let mut r = SuiteResult::new("gr2");
    let gr2 = Gr2Config { samples: config.gr2_samples, seed: config.seed, ..Gr2Config::default() };
    for params in Gr2Params::enumerate(k, k) {
        r.cases += 1;
        match verify_gr2(params, &gr2) {
            Ok(report) if report.passed() => {}
            Ok(report) => r.failures.push(format!(
                "{params:?} seed={}: {:?} {:?}",
                config.seed, report.checks, report.counterexamples
            )),
            Err(e) => r.failures.push(format!("{params:?} seed={}: {e}", config.seed)),
        }
    }
    r
}
