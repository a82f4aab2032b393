//! Acceptance run: one line per criterion, then a summary. Runs without the
//! libtest harness so the lines always reach the console.
//!
//! The process fails if any criterion fails, except the on-locus
//! reconstruction of criterion 9, which cannot hold for the stated locus.
//! That sub-check is printed as FAIL and the run instead requires the
//! measured gap to equal the analytic prediction for the stated locus.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use stochgamma::run;
use stochgamma_core::category::{Category, PointedSets, ZeroSum};
use stochgamma_core::cubical::{self, TruncatedCubicalSet, DEFAULT_EXPLOSION_BOUND};
use stochgamma_core::fincat::FiniteCategory;
use stochgamma_core::finprob::{self, FiniteProbability};
use stochgamma_core::gapped;
use stochgamma_core::infoloss::{self, LossFunctional, SuiteConfig};
use stochgamma_core::linalg::{self, CMatrix};
use stochgamma_core::pointed::{self, PointedMap, PointedSet};
use stochgamma_core::probcat::{self, Families, Family, ProbMorphism, ProbPointedSet};
use stochgamma_core::quantum::{self, ExactComplex, QuantumChannel, QuantumError, QuantumSummingFunctor};
use stochgamma_core::rational::{self, rat, RatMatrix, Rational};
use stochgamma_core::sample::{self, SampleRng};
use stochgamma_core::summing::{self, ClassicalSummingFunctor};
use stochgamma_core::wreath::{self, PcMorphism, PcObject, Wreath};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn support<R: Rng>(rng: &mut R, len: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..len).collect();
    all.shuffle(rng);
    let k = rng.random_range(1..=len);
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}

/// A probability of length `1..=4`, with zero entries about half the time.
fn maybe_sparse<R: Rng>(rng: &mut R) -> FiniteProbability {
    let len = rng.random_range(1..=4);
    if rng.random_bool(0.5) {
        let s = support(rng, len);
        sample::probability_on(rng, len, &s, 12)
    } else {
        sample::probability(rng, len, 12)
    }
}

fn c1_fp_coproduct() -> Verdict {
    let start = Instant::now();
    let mut rng = sample::rng(101);
    let (mut zero_branch, mut bad) = (0, 0);
    for _ in 0..1000 {
        let p = maybe_sparse(&mut rng);
        let p2 = maybe_sparse(&mut rng);
        let q = maybe_sparse(&mut rng);
        let s = sample::coupling(&mut rng, &p, &q);
        let s2 = sample::coupling(&mut rng, &p2, &q);
        let d = finprob::coproduct_morphisms(&s, &s2).expect("shared target");
        if q.probs().iter().any(|x| x == &rational::zero()) {
            zero_branch += 1;
        }
        let left = d.copair.compose_after(&d.left).expect("composable");
        let right = d.copair.compose_after(&d.right).expect("composable");
        if left != s || right != s2 {
            bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        bad == 0 && zero_branch >= 100 && secs < 10.0,
        format!("1000 instances, {bad} mismatches, {zero_branch} with a zero target weight, {secs:.2}s"),
    )
}

fn c2_axiom_suite() -> Verdict {
    let config = SuiteConfig { instances: 500, ..SuiteConfig::default() };
    let shannon = infoloss::axiom_suite(&LossFunctional::shannon(1.0), &config).expect("shannon runs");
    let worst = shannon.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let all = shannon.iter().all(|r| r.pass && r.max_residual < 1e-12);
    let h2 = infoloss::axiom_suite(&LossFunctional::squared_entropy(), &config).expect("squared entropy runs");
    let combine = h2.iter().find(|r| r.axiom == "combine").expect("combine is checked");
    verdict(
        all && combine.max_residual > 1e-3,
        format!(
            "shannon worst residual {worst:.3e} over {} axioms; squared entropy combine residual {:.3e}",
            shannon.len(),
            combine.max_residual
        ),
    )
}

fn sparse_object<R: Rng>(rng: &mut R) -> ProbPointedSet {
    let p = maybe_sparse(rng);
    random_object(rng, &p)
}

fn random_object<R: Rng>(rng: &mut R, p: &FiniteProbability) -> ProbPointedSet {
    let terms = p
        .probs()
        .iter()
        .map(|w| {
            let size = rng.random_range(1..=3);
            (w.clone(), PointedSet::new(size, rng.random_range(0..size)).unwrap())
        })
        .collect();
    ProbPointedSet::new(terms).unwrap()
}

/// Families over every nonzero entry: one or two distinct maps with random
/// positive weights summing to the entry.
fn random_families<R: Rng>(rng: &mut R, x: &ProbPointedSet, y: &ProbPointedSet, m: &RatMatrix) -> Families {
    let mut out = Families::new();
    for (j, row) in m.iter().enumerate() {
        for (i, e) in row.iter().enumerate() {
            if e == &rational::zero() {
                continue;
            }
            let mut maps = pointed::all_maps(x.set(i), y.set(j));
            maps.shuffle(rng);
            let k = rng.random_range(1..=maps.len().min(2));
            let split = sample::positive_simplex_point(rng, k, 6);
            let fam: Family = maps.into_iter().zip(split).map(|(f, w)| (f, w * e)).collect();
            out.insert((j, i), fam);
        }
    }
    out
}

fn random_morphism<R: Rng>(rng: &mut R, x: &ProbPointedSet, y: &ProbPointedSet) -> ProbMorphism {
    let s = sample::coupling(rng, &probcat::forget(x), &probcat::forget(y));
    let fams = random_families(rng, x, y, s.matrix());
    ProbMorphism::new(x.clone(), y.clone(), s.matrix().clone(), fams).expect("families match the coupling")
}

/// Restricts every copair family along the coprojection on one side and
/// re-aggregates with the weights of the other side. The result must be the
/// families of the original morphism.
fn reaggregate(cp: &probcat::ProbCopair, x: &ProbPointedSet, y: &ProbPointedSet, left: bool) -> Families {
    let m = y.len();
    let mut out: BTreeMap<(usize, usize), BTreeMap<PointedMap, Rational>> = BTreeMap::new();
    for (&(k, c), fam) in cp.families() {
        let (a, ap) = (c / m, c % m);
        let w = pointed::wedge(x.set(a), y.set(ap));
        let (inj, weight, key) =
            if left { (w.left, y.terms()[ap].0.clone(), a) } else { (w.right, x.terms()[a].0.clone(), ap) };
        for (h, wh) in fam {
            let slot = out.entry((k, key)).or_default();
            *slot.entry(h.after(&inj).unwrap()).or_insert_with(rational::zero) += &weight * wh;
        }
    }
    out.into_iter()
        .map(|(k, f)| (k, f.into_iter().filter(|(_, w)| w != &rational::zero()).collect::<Family>()))
        .filter(|(_, f)| !f.is_empty())
        .collect()
}

fn c3_copair_bookkeeping() -> Verdict {
    let mut rng = sample::rng(303);
    let (mut zero_cases, mut bad) = (0, 0);
    for _ in 0..200 {
        let x = sparse_object(&mut rng);
        let x2 = sparse_object(&mut rng);
        let y = sparse_object(&mut rng);
        let phi = random_morphism(&mut rng, &x, &y);
        let psi = random_morphism(&mut rng, &x2, &y);
        let cp = probcat::copair_ps(&phi, &psi).expect("shared target");
        let sigma = y.weights();
        if cp.families().keys().any(|&(k, _)| sigma[k] == rational::zero()) {
            zero_cases += 1;
        }
        let cop = probcat::coproduct_ps(&x, &x2);
        let ok = reaggregate(&cp, &x, &x2, true) == *phi.families()
            && reaggregate(&cp, &x, &x2, false) == *psi.families()
            && cp.compose_after(&cop.left).as_ref() == Ok(&phi)
            && cp.compose_after(&cop.right).as_ref() == Ok(&psi);
        if !ok {
            bad += 1;
        }
    }
    verdict(bad == 0 && zero_cases >= 20, format!("200 instances, {bad} mismatches, {zero_cases} exercising a zero σ"))
}

fn lambda_grid() -> Vec<Rational> {
    (0..=4).map(|k| rat(k, 4)).collect()
}

fn grid_points(n: usize) -> Vec<Vec<Rational>> {
    let g = lambda_grid();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.iter().flat_map(|p| g.iter().map(move |l| [p.clone(), vec![l.clone()]].concat())).collect();
    }
    out
}

fn c4_summing_law() -> Verdict {
    let (mut tables, mut fails, mut ainex_checked, mut ainex_bad) = (0, 0, 0, 0);
    for n in 1..=3 {
        for lambda in grid_points(n) {
            let phi = ClassicalSummingFunctor::new(PointedSet::new(n + 1, 0).unwrap(), lambda.clone()).unwrap();
            tables += 1;
            if !summing::verify_summing(&phi.table()).pass() {
                fails += 1;
            }
            if lambda.iter().all(|l| l != &rational::zero()) {
                ainex_checked += 1;
                if summing::ainex_holds(&phi) != Ok(true) {
                    ainex_bad += 1;
                }
            }
        }
    }
    verdict(
        fails == 0 && ainex_bad == 0,
        format!("{tables} tables with {fails} failures; inclusion-exclusion on {ainex_checked} with {ainex_bad} failures"),
    )
}

/// Functors from the poset `{0,1}^n` into `c`, counted by assigning a
/// morphism to every edge and checking objects and commuting squares.
fn brute_force_cubes(c: &FiniteCategory, n: usize) -> usize {
    if n == 0 {
        return c.objects().len();
    }
    let edges: Vec<(usize, usize)> =
        (0..1usize << n).flat_map(|v| (0..n).filter(move |k| v >> k & 1 == 0).map(move |k| (v, k))).collect();
    let index: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let specs = c.morphisms();
    let total = specs.len().pow(edges.len() as u32);
    let mut count = 0;
    for code in 0..total {
        let mut rest = code;
        let pick: Vec<usize> = edges
            .iter()
            .map(|_| {
                let m = rest % specs.len();
                rest /= specs.len();
                m
            })
            .collect();
        let mut obj = vec![None; 1 << n];
        let typed = edges.iter().zip(&pick).all(|(&(v, k), &f)| {
            let w = v | 1 << k;
            let s = *obj[v].get_or_insert(specs[f].source);
            let t = *obj[w].get_or_insert(specs[f].target);
            s == specs[f].source && t == specs[f].target
        });
        if !typed {
            continue;
        }
        let commutes = edges.iter().all(|&(v, k)| {
            (k + 1..n).filter(|l| v >> l & 1 == 0).all(|l| {
                let via_k = c.composite(pick[index[&(v | 1 << k, l)]], pick[index[&(v, k)]]);
                let via_l = c.composite(pick[index[&(v | 1 << l, k)]], pick[index[&(v, l)]]);
                via_k.is_some() && via_k == via_l
            })
        });
        if commutes {
            count += 1;
        }
    }
    count
}

fn c5_cubical_relations() -> Verdict {
    let complexes = stochgamma::reference_complexes(2);
    let rejected: Vec<&str> = complexes
        .iter()
        .filter(|(_, k)| TruncatedCubicalSet::from_raw(k.raw().clone()).is_err())
        .map(|(n, _)| n.as_str())
        .collect();
    let z2 = FiniteCategory::cyclic_group(2);
    let brute: Vec<usize> = (0..=2).map(|n| brute_force_cubes(&z2, n)).collect();
    let built = cubical::cubical_nerve(&z2, 2, DEFAULT_EXPLOSION_BOUND).unwrap().complex.sizes().to_vec();
    let mut others = true;
    for (_, c) in stochgamma::reference_categories() {
        let sizes = cubical::cubical_nerve(&c, 3, DEFAULT_EXPLOSION_BOUND).unwrap().complex.sizes().to_vec();
        let counted: Vec<usize> = (0..=3).map(|n| brute_force_cubes(&c, n)).collect();
        others &= sizes == counted;
    }
    verdict(
        rejected.is_empty() && brute == [1, 2, 8] && built == brute && others,
        format!(
            "{} complexes revalidated, rejected {rejected:?}; Z/2 recount {brute:?}, built {built:?}; level-3 recounts agree: {others}",
            complexes.len()
        ),
    )
}

fn c6_euler_multiplicativity() -> Verdict {
    let mut rng = sample::rng(606);
    let mut bad = 0;
    for _ in 0..100 {
        let (x, y) = (rng.random_range(1..=7usize), rng.random_range(1..=7usize));
        let k = TruncatedCubicalSet::discrete(x, 2);
        let l = TruncatedCubicalSet::discrete(y, 2);
        let s = cubical::smash_cubical(&k, &l);
        let oracle = (x as i64 - 1) * (y as i64 - 1);
        let revalidated = TruncatedCubicalSet::from_raw(s.raw().clone()).is_ok();
        if s.reduced_euler() != k.reduced_euler() * l.reduced_euler() || s.reduced_euler() != oracle || !revalidated {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("100 smashes, {bad} mismatches"))
}

fn c7_channel_roundtrip() -> Verdict {
    let mut rng = sample::rng(707);
    let (mut worst_eig, mut worst_tp, mut worst_rt): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let (din, dout, k) = (rng.random_range(1..=4), rng.random_range(1..=4), rng.random_range(1..=4));
        let kraus = quantum::random_kraus(&mut rng, din, dout, k);
        let ch = QuantumChannel::from_kraus(kraus.clone()).expect("random channel is CPTP");
        worst_eig = worst_eig.min(ch.map().min_choi_eigenvalue());
        worst_tp = worst_tp.max(ch.map().tp_defect());
        let (_, err) = quantum::channel_roundtrip(kraus).expect("reconstruction is CPTP");
        worst_rt = worst_rt.max(err);
    }
    let transpose_rejected = (2..=4).all(|d| matches!(QuantumChannel::new(quantum::transpose_map(d)), Err(QuantumError::NotCp(_))));
    verdict(
        worst_eig > -1e-9 && worst_tp < 1e-9 && worst_rt < 1e-9 && transpose_rejected,
        format!(
            "min Choi eigenvalue {worst_eig:.3e}, TP defect {worst_tp:.3e}, round-trip error {worst_rt:.3e}; transpose rejected: {transpose_rejected}"
        ),
    )
}

/// A Gaussian rational `θ` with `|θ|² ≤ α(1-α)`, found by rejection.
fn random_theta<R: Rng>(rng: &mut R, alpha: &Rational) -> ExactComplex {
    let bound = alpha * (rational::one() - alpha);
    loop {
        let den = rng.random_range(1..=12);
        let (re, im) = (rat(rng.random_range(-den..=den), den), rat(rng.random_range(-den..=den), den));
        if &re * &re + &im * &im <= bound {
            return ExactComplex::new(re, im);
        }
    }
}

fn c8_annulus_diagonal() -> Verdict {
    let mut rng = sample::rng(808);
    let (mut bad_diag, mut not_psd) = (0, 0);
    let mut worst_flip: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=3);
        let alpha: Vec<Rational> = (0..n)
            .map(|_| {
                let d = rng.random_range(1..=12);
                rat(rng.random_range(0..=d), d)
            })
            .collect();
        let theta: Vec<ExactComplex> = alpha.iter().map(|a| random_theta(&mut rng, a)).collect();
        let f = QuantumSummingFunctor::new(alpha.clone(), theta).expect("inside the disk");
        let classical = ClassicalSummingFunctor::new(PointedSet::new(n + 1, 0).unwrap(), alpha.clone()).unwrap();
        for mask in 0..1u32 << n {
            if f.evaluate(mask).is_err() {
                not_psd += 1;
            }
            if f.diagonal(mask).unwrap() != classical.evaluate(mask).unwrap().weights() {
                bad_diag += 1;
            }
        }
        let a = rational::to_f64(&alpha[0]);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        worst_flip = worst_flip.max((quantum::psd_flip_radius_sq(a, phase, 80) - a * (1.0 - a)).abs());
    }
    verdict(
        bad_diag == 0 && not_psd == 0 && worst_flip < 1e-9,
        format!("100 instances, {not_psd} non-PSD states, {bad_diag} diagonal mismatches, worst flip offset {worst_flip:.3e}"),
    )
}

struct Reconstruction {
    worst_to_delta: f64,
    worst_to_prediction: f64,
    worst_consistent: f64,
}

/// Gap of the Hamiltonian read back from the block at `(α, |θ|² = r2)`.
fn reconstructed_spectrum(alpha: f64, r2: f64, phase: f64, beta: f64) -> Vec<f64> {
    let theta = linalg::c(r2.max(0.0).sqrt() * phase.cos(), r2.max(0.0).sqrt() * phase.sin());
    let rho = quantum::validate_density(&quantum::rho_single(alpha, theta)).expect("on-locus block is a state");
    linalg::eigenvalues(&gapped::hamiltonian_from_state(&rho, beta).expect("full rank"))
}

fn reconstruct(beta: f64, delta: f64) -> Reconstruction {
    let locus = gapped::gap_locus(beta, delta).unwrap();
    let (lo, hi) = locus.interval.expect("feasible");
    let r = (1.0 - 4.0 * locus.c).sqrt();
    let predicted = ((1.0 + r) / (1.0 - r)).ln() / beta;
    let mut out = Reconstruction { worst_to_delta: 0.0, worst_to_prediction: 0.0, worst_consistent: 0.0 };
    for step in 0..=20 {
        let alpha = lo + (hi - lo) * step as f64 / 20.0;
        let spec = reconstructed_spectrum(alpha, locus.radius_sq(alpha), 0.3 * step as f64, beta);
        out.worst_to_delta = out.worst_to_delta.max(spec[0].abs().max((spec[1] - delta).abs()));
        out.worst_to_prediction = out.worst_to_prediction.max(spec[0].abs().max((spec[1] - predicted).abs()));
        let r2 = gapped::gibbs_radius_sq(locus.t, alpha);
        if r2 >= 0.0 {
            let spec = reconstructed_spectrum(alpha, r2, 0.3 * step as f64, beta);
            out.worst_consistent = out.worst_consistent.max(spec[0].abs().max((spec[1] - delta).abs()));
        }
    }
    out
}

/// Returns the verdict and whether the only failing part is the stated-locus
/// reconstruction, with a measured gap matching the analytic prediction.
fn c9_gap_locus() -> (Verdict, bool) {
    let closed = (7.0 + 4.0 * 3f64.sqrt()).ln();
    let (mut lo, mut hi) = (2.0, 3.0);
    let flips = !gapped::gap_locus(1.0, lo).unwrap().feasible && gapped::gap_locus(1.0, hi).unwrap().feasible;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if gapped::gap_locus(1.0, mid).unwrap().feasible {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let threshold_ok = flips
        && (hi - closed).abs() < 1e-9
        && (gapped::threshold_beta_delta() - closed).abs() < 1e-12
        && (2.633916 - closed).abs() < 1e-6;

    // α² - α + c = 0 solved in the cancellation-free form.
    let t: f64 = 0.01;
    let c = 4.0 * t / ((1.0 + t) * (1.0 + t));
    let q = 0.5 * (1.0 + (1.0 - 4.0 * c).sqrt());
    let (root_lo, root_hi) = (c / q, q);
    let at = gapped::gap_locus_at_t(t).unwrap();
    let (e_lo, e_hi) = at.interval.expect("t = 0.01 is feasible");
    let endpoints_ok = (e_lo - root_lo).abs() < 1e-9 && (e_hi - root_hi).abs() < 1e-9;

    let cases = [(1.0, -t.ln()), (2.0, 1.5), (0.5, 8.0)];
    let runs: Vec<Reconstruction> = cases.iter().map(|&(b, d)| reconstruct(b, d)).collect();
    let to_delta = runs.iter().map(|r| r.worst_to_delta).fold(0.0, f64::max);
    let to_prediction = runs.iter().map(|r| r.worst_to_prediction).fold(0.0, f64::max);
    let consistent = runs.iter().map(|r| r.worst_consistent).fold(0.0, f64::max);
    let recon_ok = to_delta < 1e-6;

    let pass = threshold_ok && endpoints_ok && recon_ok;
    let detail = format!(
        "threshold bisection {hi:.12} vs {closed:.12} ok={threshold_ok}; endpoints at t=0.01 ({e_lo:.12}, {e_hi:.12}) ok={endpoints_ok}; \
         stated-locus reconstruction worst |spec - {{0, Δ}}| = {to_delta:.3e} ok={recon_ok} \
         (matches the determinant-based prediction to {to_prediction:.1e}; the Gibbs-consistent locus reconstructs to {consistent:.1e})"
    );
    let documented = threshold_ok && endpoints_ok && !recon_ok && to_prediction < 1e-6 && consistent < 1e-6;
    (verdict(pass, detail), documented)
}

fn c10_kronecker_sums() -> Verdict {
    let mut rng = sample::rng(1010);
    let (mut worst, mut rejected): (f64, usize) = (0.0, 0);
    for _ in 0..200 {
        let (n, m) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let (d1, d2) = (rng.random_range(0.2..2.0), rng.random_range(0.2..2.0));
        let h = gapped::random_gapped(&mut rng, n, d1, 3.0);
        let h2 = gapped::random_gapped(&mut rng, m, d2, 3.0);
        let sum: CMatrix = gapped::kronecker_sum(h.matrix(), h2.matrix());
        match gapped::validate_gapped(&sum, d1.min(d2)) {
            Ok(g) => {
                let mut oracle: Vec<f64> =
                    h.spectrum().iter().flat_map(|x| h2.spectrum().iter().map(move |y| x + y)).collect();
                oracle.sort_by(f64::total_cmp);
                for (a, b) in g.spectrum().iter().zip(&oracle) {
                    worst = worst.max((a - b).abs());
                }
            }
            Err(_) => rejected += 1,
        }
    }
    verdict(worst < 1e-9 && rejected == 0, format!("200 pairs, {rejected} rejected, worst spectral error {worst:.3e}"))
}

fn pc_object(x: &ProbPointedSet) -> PcObject<PointedSet> {
    PcObject { terms: x.terms().to_vec() }
}

fn pc_morphism(phi: &ProbMorphism) -> PcMorphism<PointedSet, PointedMap> {
    PcMorphism {
        source: pc_object(phi.source()),
        target: pc_object(phi.target()),
        matrix: phi.stoch().matrix().clone(),
        families: phi.families().clone(),
    }
}

fn coin(l: &Rational) -> PcObject<PointedSet> {
    PcObject::new(vec![(l.clone(), PointedSet::new(2, 0).unwrap()), (rational::one() - l, PointedSet::new(2, 1).unwrap())])
        .unwrap()
}

fn c11_oracle_equivalence() -> Verdict {
    let probes: Vec<PointedSet> =
        (1..=3).flat_map(|s| (0..s).map(move |b| PointedSet::new(s, b).unwrap())).collect();
    let w: Wreath<PointedSets> = wreath::wreath_pc(PointedSets, &probes).expect("pointed sets satisfy the interface");
    let mut rng: SampleRng = sample::rng(1111);
    let mut bad = 0;
    for _ in 0..100 {
        let x = sparse_object(&mut rng);
        let x2 = sparse_object(&mut rng);
        let y = sparse_object(&mut rng);
        let z = sparse_object(&mut rng);
        let phi = random_morphism(&mut rng, &x, &y);
        let psi = random_morphism(&mut rng, &x2, &y);
        let chi = random_morphism(&mut rng, &y, &z);

        let concrete = probcat::coproduct_ps(&x, &x2);
        let generic = w.sum(&pc_object(&x), &pc_object(&x2)).expect("wedges exist");
        let sum_ok = generic.object == pc_object(&concrete.object)
            && generic.left == pc_morphism(&concrete.left)
            && generic.right == pc_morphism(&concrete.right);

        let cp = probcat::copair_ps(&phi, &psi).unwrap();
        let cp_pc = PcMorphism {
            source: pc_object(cp.source()),
            target: pc_object(cp.target()),
            matrix: cp.transport().matrix().clone(),
            families: cp.families().clone(),
        };
        let copair_ok = w.copair(&pc_morphism(&phi), &pc_morphism(&psi)) == Some(cp_pc);

        let composite = probcat::compose_prob(&chi, &phi).unwrap();
        let compose_ok = w.compose(&pc_morphism(&chi), &pc_morphism(&phi)) == Some(pc_morphism(&composite));

        let unit_ok = w.identity(&pc_object(&x)) == pc_morphism(&ProbMorphism::identity(&x))
            && w.to_zero(&pc_object(&x)) == pc_morphism(&ProbMorphism::to_zero(&x))
            && w.from_zero(&pc_object(&x)) == pc_morphism(&ProbMorphism::from_zero(&x));

        if !(sum_ok && copair_ok && compose_ok && unit_ok) {
            bad += 1;
        }
    }

    let coins: Vec<PcObject<PointedSet>> = lambda_grid().iter().map(coin).collect();
    let (mut assignments, mut table_bad) = (0, 0);
    for n in 1..=3 {
        let s = summing::generic_summing_enumerate(
            &w,
            &coins,
            n,
            |a, b| if a == b { vec![w.identity(a)] } else { vec![] },
            1_000_000,
        )
        .expect("within bound");
        if s.assignments.len() != 5usize.pow(n as u32) {
            table_bad += 1;
        }
        for a in &s.assignments {
            assignments += 1;
            let lambda: Vec<Rational> = a.iter().map(|o| o.terms[0].0.clone()).collect();
            let phi = ClassicalSummingFunctor::new(PointedSet::new(n + 1, 0).unwrap(), lambda).unwrap();
            let table = phi.table();
            for mask in 1u32..1 << n {
                let objs: Vec<PcObject<PointedSet>> =
                    (0..n).filter(|k| mask >> k & 1 == 1).map(|k| a[k].clone()).collect();
                let got = summing::iterated_sum(&w, &objs).expect("sums exist");
                if got.terms != table.values[mask as usize] {
                    table_bad += 1;
                }
            }
        }
    }
    verdict(
        bad == 0 && table_bad == 0,
        format!("100 shared instances with {bad} disagreements; {assignments} enumerated functors with {table_bad} table mismatches"),
    )
}

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn command_matrix(out_dir: &std::path::Path) -> Vec<Vec<String>> {
    let d = |f: &str| format!("{DATA}/{f}");
    let o = |f: &str| out_dir.join(f).to_string_lossy().into_owned();
    let rows: Vec<Vec<String>> = vec![
        vec!["validate".into(), "--input".into(), d("density.json")],
        vec!["validate".into(), "--input".into(), d("transpose.json")],
        vec!["validate".into(), "--input".into(), r#"{"kind":"finite-probability","probs":["1/3","2/3"]}"#.into()],
        vec!["loss".into(), "--pipeline".into(), d("pipeline.json")],
        vec!["loss".into(), "--pipeline".into(), d("pipeline.json"), "--loss".into(), "squared-entropy".into()],
        vec!["coproduct".into(), "--input".into(), d("coproduct.json")],
        vec!["nerve".into(), "--category".into(), d("z2.json"), "--nmax".into(), "2".into()],
        vec!["nerve".into(), "--builtin".into(), "pointed:3".into(), "--nmax".into(), "1".into()],
        vec!["summing".into(), "--input".into(), d("summing.json")],
        vec!["summing".into(), "--input".into(), d("quantum_summing.json")],
        vec!["strata".into(), "--kind".into(), "classical".into(), "--n".into(), "3".into()],
        vec!["strata".into(), "--kind".into(), "quantum".into(), "--n".into(), "2".into(), "--alpha".into(), "0.5,0.25".into()],
        vec!["strata".into(), "--kind".into(), "gapped".into(), "--n".into(), "2".into(), "--beta".into(), "1".into(), "--delta".into(), "3".into()],
        vec!["gap-locus".into(), "--beta".into(), "1".into(), "--delta".into(), "2.7".into()],
        vec!["gap-check".into(), "--input".into(), d("gap_check.json")],
        vec!["axiom-suite".into(), "--seed".into(), "7".into()],
        vec!["axiom-suite".into(), "--loss".into(), "squared-entropy".into(), "--seed".into(), "7".into()],
        vec!["export".into(), "nerve".into(), "--builtin".into(), "cyclic:2".into(), "--nmax".into(), "2".into(), "--out".into(), o("nerve.json")],
        vec!["export".into(), "strata".into(), "--kind".into(), "quantum".into(), "--n".into(), "2".into(), "--out".into(), o("strata.json")],
    ];
    rows
}

fn run_matrix(out_dir: &std::path::Path) -> Vec<String> {
    let mut out = Vec::new();
    for args in command_matrix(out_dir) {
        let r = run(std::iter::once("stochgamma".to_string()).chain(args.iter().cloned()));
        out.push(format!("{}\n{}{}", r.code, r.stdout, r.stderr));
    }
    for f in ["nerve.json", "strata.json"] {
        out.push(std::fs::read_to_string(out_dir.join(f)).unwrap_or_default());
    }
    out
}

fn c12_cli_determinism() -> Verdict {
    let start = Instant::now();
    // Export reports echo their output path, so both runs share one directory.
    let dir = std::env::temp_dir().join(format!("stochgamma-acceptance-{}", std::process::id()));
    let mut runs = Vec::new();
    for _ in 0..2 {
        std::fs::create_dir_all(&dir).unwrap();
        runs.push(run_matrix(&dir));
        std::fs::remove_dir_all(&dir).ok();
    }
    let differing = runs[0].iter().zip(&runs[1]).filter(|(x, y)| x != y).count();
    let secs = start.elapsed().as_secs_f64();
    verdict(
        differing == 0 && secs < 120.0,
        format!("{} reports per run, {differing} differ between runs, {secs:.2}s", runs[0].len()),
    )
}

fn main() {
    let start = Instant::now();
    let (c9, c9_documented) = c9_gap_locus();
    let results: Vec<(u32, &str, Verdict)> = vec![
        (1, "fp-coproduct", c1_fp_coproduct()),
        (2, "axiom-suite", c2_axiom_suite()),
        (3, "copair-bookkeeping", c3_copair_bookkeeping()),
        (4, "summing-law", c4_summing_law()),
        (5, "cubical-relations", c5_cubical_relations()),
        (6, "euler-multiplicativity", c6_euler_multiplicativity()),
        (7, "channel-roundtrip", c7_channel_roundtrip()),
        (8, "annulus-diagonal", c8_annulus_diagonal()),
        (9, "gap-locus", c9),
        (10, "kronecker-sum", c10_kronecker_sums()),
        (11, "oracle-equivalence", c11_oracle_equivalence()),
        (12, "cli-determinism", c12_cli_determinism()),
    ];
    for (id, name, v) in &results {
        println!("criterion {id:>2} [{name}] {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    let passed = results.iter().filter(|(_, _, v)| v.pass).count();
    let unexpected: Vec<u32> = results.iter().filter(|(id, _, v)| !v.pass && !(*id == 9 && c9_documented)).map(|(id, _, _)| *id).collect();
    println!("{passed}/{} criteria pass in {:.1}s", results.len(), start.elapsed().as_secs_f64());
    if !results[8].2.pass && c9_documented {
        println!(
            "criterion 9 fails only in the on-locus reconstruction: the stated locus fixes det ρ = 4t/(1+t)², \
             four times the Gibbs determinant, so every reconstructed gap equals the predicted smaller value"
        );
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
