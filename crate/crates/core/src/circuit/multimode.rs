//! Two-mode circuits: SNAIL plus buffer resonator, array mode, or stray inductance.
//!
//! The SNAIL is first diagonalized on its own; the joint Hamiltonian is then
//! built on the product of SNAIL dressed states and secondary-mode Fock
//! states. All joint Hamiltonians are real symmetric in this basis because
//! the charge operators enter in pairs.

use ndarray::{s, Array1, Array2, Axis};

use super::fock::{ladder, snail_hamiltonian, DvrFrame};
use super::potential::{cos_terms, harmonic_frame};
use super::{fix_signs, Basis, CircuitSpec, FockMap, HilbertConfig, Operators, Scenario, SpectralData, Zpf};
use crate::error::{invalid, Result};
use crate::linalg::{eigh_real, C64};

/// Overlap difference below which a labeling decision is reported as a tie.
pub const LABEL_TIE_TOL: f64 = 0.05;

fn kron_real(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let x = a[[i, j]];
            if x == 0.0 {
                continue;
            }
            out.slice_mut(s![i * br..(i + 1) * br, j * bc..(j + 1) * bc]).zip_mut_with(b, |o, &y| *o = x * y);
        }
    }
    out
}

fn rotate_real(v: &Array2<f64>, op: &Array2<f64>) -> Array2<f64> {
    v.t().dot(&op.dot(v))
}

fn to_c(a: &Array2<f64>) -> Array2<C64> {
    a.mapv(|x| C64::new(x, 0.0))
}

fn to_ic(a: &Array2<f64>) -> Array2<C64> {
    a.mapv(|x| C64::new(0.0, x))
}

/// SNAIL diagonalized in Fock space, with operators in its dressed basis.
struct SnailBasis {
    energies: Array1<f64>,
    /// Fock-to-dressed transform, `n_fock x ns`.
    v: Array2<f64>,
    /// `n = i * n_im` in the dressed basis.
    n_im: Array2<f64>,
    a: Array2<f64>,
    phi: Array2<f64>,
    frame: DvrFrame,
    zpf: Zpf,
    phi_min: f64,
}

impl SnailBasis {
    fn new(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<Self> {
        let core = snail_hamiltonian(spec, cfg.n_fock, cfg.fock_pad)?;
        let (e, mut v) = eigh_real(&core.h)?;
        fix_signs(&mut v);
        let ns = cfg.snail_basis.min(cfg.n_fock);
        let v = v.slice(s![.., ..ns]).to_owned();
        let tay = core.taylor;
        let a_f = ladder(cfg.n_fock);
        let n_im = rotate_real(&v, &((&a_f.t() - &a_f) * tay.n_zpf));
        let a = rotate_real(&v, &a_f);
        let phi = rotate_real(&v, &((&a_f + &a_f.t()) * tay.phi_zpf + Array2::<f64>::eye(cfg.n_fock) * tay.phi_min));
        Ok(SnailBasis {
            energies: e.slice(s![..ns]).to_owned(),
            v,
            n_im,
            a,
            phi,
            frame: core.frame,
            zpf: Zpf { phi_zpf: tay.phi_zpf, n_zpf: tay.n_zpf },
            phi_min: tay.phi_min,
        })
    }

    fn ns(&self) -> usize {
        self.energies.len()
    }

    /// `f(phi)` in the SNAIL dressed basis.
    fn function(&self, f: impl Fn(f64) -> f64) -> Array2<f64> {
        rotate_real(&self.v, &self.frame.function(f))
    }
}

/// Secondary-mode operators on `d` Fock states.
struct Secondary {
    d: usize,
    b: Array2<f64>,
    /// `b^dag - b`; the normalized charge is `i` times this.
    p_im: Array2<f64>,
}

impl Secondary {
    fn new(d: usize) -> Self {
        let b = ladder(d);
        let p_im = &b.t() - &b;
        Secondary { d, b, p_im }
    }
}

/// Labels `(i_s, j)` by overlap with bare product states and repeated
/// application of the secondary creation operator.
fn label_states(
    vecs: &Array2<f64>,
    ns: usize,
    d: usize,
    i_limit: usize,
    warnings: &mut Vec<String>,
) -> Vec<Option<(usize, usize)>> {
    let total = vecs.ncols();
    let mut labels: Vec<Option<(usize, usize)>> = vec![None; total];
    let mut taken = vec![false; total];
    let i_limit = i_limit.min(ns);
    let mut prev: Vec<Option<usize>> = vec![None; i_limit];
    for j in 0..d {
        // Candidate vectors for every SNAIL label at this excitation level.
        let mut cands: Vec<(usize, Array1<f64>)> = vec![];
        for i in 0..i_limit {
            let c = if j == 0 {
                let mut e = Array1::zeros(ns * d);
                e[i * d] = 1.0;
                e
            } else {
                let Some(m) = prev[i] else { continue };
                let v = vecs.column(m);
                let mut c = Array1::zeros(ns * d);
                for s_ in 0..ns {
                    for jj in 0..d - 1 {
                        c[s_ * d + jj + 1] = (jj as f64 + 1.0).sqrt() * v[s_ * d + jj];
                    }
                }
                let norm = c.dot(&c).sqrt();
                if norm < 1e-12 {
                    continue;
                }
                c / norm
            };
            cands.push((i, c));
        }
        let mut pairs: Vec<(f64, usize, usize)> = vec![];
        for (ci, (_, c)) in cands.iter().enumerate() {
            let ov = vecs.t().dot(c);
            let mut best = (0.0f64, 0usize);
            let mut second = 0.0f64;
            for (m, &x) in ov.iter().enumerate() {
                if taken[m] {
                    continue;
                }
                let w = x * x;
                if w > best.0 {
                    second = best.0;
                    best = (w, m);
                } else if w > second {
                    second = w;
                }
                if w > 1e-6 {
                    pairs.push((w, ci, m));
                }
            }
            if best.0 - second < LABEL_TIE_TOL && best.0 > 0.0 {
                warnings.push(format!(
                    "ambiguous label ({}, {j}): overlaps {:.4} and {:.4}",
                    cands[ci].0, best.0, second
                ));
            }
        }
        // Deterministic greedy assignment: larger overlap first, then lower
        // SNAIL label, then lower dressed index.
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut done = vec![false; cands.len()];
        let mut next: Vec<Option<usize>> = vec![None; i_limit];
        for (_, ci, m) in pairs {
            if done[ci] || taken[m] {
                continue;
            }
            done[ci] = true;
            taken[m] = true;
            let i = cands[ci].0;
            labels[m] = Some((i, j));
            next[i] = Some(m);
        }
        prev = next;
    }
    labels
}

struct JointOps {
    /// SNAIL charge, `n = i * n_im`.
    n_im: Array2<f64>,
    a: Array2<f64>,
    phi: Array2<f64>,
    b: Array2<f64>,
    p_im: Array2<f64>,
}

/// Diagonalizes the joint Hamiltonian, labels, filters and packages the result.
fn finish(
    scenario: Scenario,
    h: Array2<f64>,
    snail: SnailBasis,
    sec: Secondary,
    cfg: &HilbertConfig,
) -> Result<SpectralData> {
    let ns = snail.ns();
    let d = sec.d;
    let (e, mut v) = eigh_real(&h)?;
    fix_signs(&mut v);
    let mut warnings = vec![];
    let labels = label_states(&v, ns, d, cfg.n_keep, &mut warnings);
    let mut keep: Vec<usize> = (0..e.len())
        .filter(|&m| matches!(labels[m], Some((i, j)) if i < cfg.n_keep && j < cfg.secondary_mode_dim))
        .collect();
    keep.sort_by(|&x, &y| e[x].total_cmp(&e[y]).then(x.cmp(&y)));
    if let Some(cap) = cfg.max_retained {
        keep.truncate(cap);
    }
    if keep.is_empty() {
        return invalid("no dressed states passed the label filter");
    }
    let vr = v.select(Axis(1), &keep);
    let ident = Array2::<f64>::eye(d);
    let ident_s = Array2::<f64>::eye(ns);
    let ops = JointOps {
        n_im: kron_real(&snail.n_im, &ident),
        a: kron_real(&snail.a, &ident),
        phi: kron_real(&snail.phi, &ident),
        b: kron_real(&ident_s, &sec.b),
        p_im: kron_real(&ident_s, &sec.p_im),
    };
    let ops = Operators {
        n: to_ic(&rotate_real(&vr, &ops.n_im)),
        phi: Some(to_c(&rotate_real(&vr, &ops.phi))),
        a: Some(to_c(&rotate_real(&vr, &ops.a))),
        secondary_charge: Some(to_ic(&rotate_real(&vr, &ops.p_im))),
        secondary_a: Some(to_c(&rotate_real(&vr, &ops.b))),
    };
    Ok(SpectralData {
        scenario,
        basis: Basis::Fock,
        energies: keep.iter().map(|&m| e[m]).collect(),
        states: to_c(&vr),
        labels: keep.iter().map(|&m| labels[m].expect("filtered")).collect(),
        ops,
        zpf: snail.zpf,
        phi_min: snail.phi_min,
        fock_map: Some(FockMap { snail: to_c(&snail.v), secondary_dim: d }),
        warnings,
    })
}

fn snail_diag(snail: &SnailBasis, d: usize) -> Array2<f64> {
    kron_real(&Array2::from_diag(&snail.energies), &Array2::eye(d))
}

/// SNAIL coupled to a linear buffer: `H_s + w_b b^dag b + i g n (b^dag - b)`.
pub fn build_buffer_coupled(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<SpectralData> {
    spec.expect(Scenario::Buffer)?;
    cfg.validate()?;
    let bp = spec.buffer.expect("validated");
    let snail = SnailBasis::new(spec, cfg)?;
    let sec = Secondary::new(cfg.secondary_mode_dim);
    let d = sec.d;
    let num = Array2::from_diag(&Array1::from_iter((0..d).map(|j| j as f64)));
    // i g n (b^dag - b) = i g (i n_im)(b^dag - b) = -g n_im (x) p_im
    let h = snail_diag(&snail, d)
        + kron_real(&Array2::eye(snail.ns()), &(num * bp.omega_b))
        - kron_real(&snail.n_im, &sec.p_im) * bp.g;
    finish(Scenario::Buffer, h, snail, sec, cfg)
}

/// SNAIL coupled to the antisymmetric array mode through the cosines and a
/// charge-charge term.
pub fn build_array_mode(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<SpectralData> {
    spec.expect(Scenario::ArrayMode)?;
    cfg.validate()?;
    let ap = spec.array.expect("validated");
    let snail = SnailBasis::new(spec, cfg)?;
    let sec = Secondary::new(cfg.secondary_mode_dim);
    let d = sec.d;
    let tay = super::taylor_coefficients(spec, 4)?;
    let e_j_minus = spec.e_j * tay.c[2];
    let (_, zpf_m) = harmonic_frame(ap.beta * spec.e_c, e_j_minus);
    let nz_m = 0.5 / zpf_m;
    let frame_m = DvrFrame::new(0.0, zpf_m, d, cfg.fock_pad)?;
    let n2_m = frame_m.momentum_squared() * (-nz_m * nz_m);
    let mut h = snail_diag(&snail, d) + kron_real(&Array2::eye(snail.ns()), &(n2_m * (4.0 * ap.beta * spec.e_c)));
    // g n n_- = g (i n_im)(i nz_- p_im) = -g nz_- n_im (x) p_im
    h = h - kron_real(&snail.n_im, &sec.p_im) * (ap.g * nz_m);
    for t in cos_terms(spec) {
        let cs = snail.function(|p| -spec.e_j * t.amp * (t.freq * p + t.phase).cos());
        let cm = frame_m.function(|p| (t.freq * p).cos() - 1.0);
        h = h + kron_real(&cs, &cm);
    }
    let mut sd = finish(Scenario::ArrayMode, h, snail, sec, cfg)?;
    if ap.include_transverse {
        sd.warnings.push("transverse array modes are not retained in the Hamiltonian".into());
    }
    Ok(sd)
}

/// SNAIL in series with a stray inductance `E_L` whose mode sits at `omega_l`.
pub fn build_inductance(spec: &CircuitSpec, cfg: &HilbertConfig) -> Result<SpectralData> {
    spec.expect(Scenario::Inductance)?;
    cfg.validate()?;
    let lp = spec.inductor.expect("validated");
    let snail = SnailBasis::new(spec, cfg)?;
    let sec = Secondary::new(cfg.secondary_mode_dim);
    let d = sec.d;
    let zpf_l = (lp.omega_l / (2.0 * lp.e_l)).sqrt();
    let frame_l = DvrFrame::new(0.0, zpf_l, d, cfg.fock_pad)?;
    let num = Array2::from_diag(&Array1::from_iter((0..d).map(|j| j as f64)));
    let mut h = snail_diag(&snail, d) + kron_real(&Array2::eye(snail.ns()), &(num * lp.omega_l));
    // U(phi - phi_l) - U(phi) with cos(A - B) = cos A cos B + sin A sin B.
    for t in cos_terms(spec) {
        let amp = -spec.e_j * t.amp;
        let cs = snail.function(|p| amp * (t.freq * p + t.phase).cos());
        let ss = snail.function(|p| amp * (t.freq * p + t.phase).sin());
        let cl = frame_l.function(|p| (t.freq * p).cos() - 1.0);
        let sl = frame_l.function(|p| (t.freq * p).sin());
        h = h + kron_real(&cs, &cl) + kron_real(&ss, &sl);
    }
    finish(Scenario::Inductance, h, snail, sec, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_single_mode, ArrayParams, BufferParams, InductorParams};
    use crate::linalg::{hermiticity_residual, orthonormality_residual};
    use crate::units::{ghz, mhz};

    fn small_cfg() -> HilbertConfig {
        HilbertConfig { n_fock: 80, n_keep: 12, snail_basis: 30, secondary_mode_dim: 4, ..Default::default() }
    }

    fn buffer_spec(g: f64) -> CircuitSpec {
        let mut s = CircuitSpec::fig1();
        s.scenario = Scenario::Buffer;
        s.buffer = Some(BufferParams { omega_b: ghz(12.47), g });
        s
    }

    #[test]
    fn uncoupled_buffer_factorizes() {
        let cfg = small_cfg();
        let sd = build_buffer_coupled(&buffer_spec(0.0), &cfg).unwrap();
        let single = build_single_mode(&CircuitSpec::fig1(), &HilbertConfig { n_fock: 80, n_keep: 30, ..Default::default() })
            .unwrap();
        assert!(sd.warnings.is_empty(), "{:?}", sd.warnings);
        for (k, &(i, j)) in sd.labels.iter().enumerate() {
            let expect = single.energies[i] + j as f64 * ghz(12.47);
            assert!((sd.energies[k] - expect).abs() < 1e-6 * ghz(1.0));
        }
    }

    #[test]
    fn buffer_invariants_and_label_consistency() {
        let cfg = small_cfg();
        let sd = build_buffer_coupled(&buffer_spec(mhz(100.0)), &cfg).unwrap();
        assert!(orthonormality_residual(&sd.states) < 1e-10);
        assert!(hermiticity_residual(&sd.ops.n) < 1e-10);
        assert!(hermiticity_residual(sd.ops.secondary_charge.as_ref().unwrap()) < 1e-10);
        // b^dag applied to (i, j) overlaps most with (i, j + 1).
        let bd = crate::linalg::dagger(sd.ops.secondary_a.as_ref().unwrap());
        for i in 0..4 {
            for j in 0..2 {
                let from = sd.index_of((i, j)).unwrap();
                let to = sd.index_of((i, j + 1)).unwrap();
                let col = bd.column(from);
                let best = (0..sd.dim()).max_by(|&x, &y| col[x].norm().total_cmp(&col[y].norm())).unwrap();
                assert_eq!(best, to, "label ({i},{j})");
            }
        }
    }

    #[test]
    fn dispersive_shift_scales_with_coupling() {
        // chi between the (0,*) and (1,*) ladders is quadratic in g at weak
        // coupling; g -> g/100 reduces it by ~1e-4 up to higher-order terms.
        let cfg = small_cfg();
        let chi = |g: f64| {
            let sd = build_buffer_coupled(&buffer_spec(g), &cfg).unwrap();
            let e = |l| sd.energies[sd.index_of(l).unwrap()];
            (e((1, 1)) - e((1, 0))) - (e((0, 1)) - e((0, 0)))
        };
        let big = chi(mhz(100.0));
        let small = chi(mhz(1.0));
        let ratio = small / big;
        assert!((ratio / 1e-4 - 1.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn frozen_array_mode_recovers_single_mode() {
        let mut s = CircuitSpec::fig1();
        s.scenario = Scenario::ArrayMode;
        s.array = Some(ArrayParams { beta: 1e-12, g: 0.0, include_transverse: false });
        let cfg = HilbertConfig { secondary_mode_dim: 1, ..small_cfg() };
        let sd = build_array_mode(&s, &cfg).unwrap();
        let single = build_single_mode(&CircuitSpec::fig1(), &HilbertConfig { n_fock: 80, n_keep: 12, ..Default::default() })
            .unwrap();
        // The frozen mode still carries zero-point energy 4 beta E_C <n^2> = omega_-/4.
        let offset = sd.energies[0] - single.energies[0];
        for k in 0..12 {
            assert!((sd.energies[k] - single.energies[k] - offset).abs() < 1e-6 * ghz(1.0));
        }
    }

    #[test]
    fn stiff_inductance_recovers_single_mode() {
        let mut s = CircuitSpec::fig1();
        s.scenario = Scenario::Inductance;
        s.inductor = Some(InductorParams { e_l: ghz(1e12), omega_l: ghz(80.0) });
        let cfg = HilbertConfig { secondary_mode_dim: 2, ..small_cfg() };
        let sd = build_inductance(&s, &cfg).unwrap();
        let single = build_single_mode(&CircuitSpec::fig1(), &HilbertConfig { n_fock: 80, n_keep: 12, ..Default::default() })
            .unwrap();
        for i in 0..12 {
            let k = sd.index_of((i, 0)).unwrap();
            assert!((sd.energies[k] - single.energies[i]).abs() < 1e-3 * mhz(1.0));
        }
    }
}
