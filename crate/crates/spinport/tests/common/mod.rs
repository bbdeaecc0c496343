//! Brute-force reference implementations for cross-checking the library.
//!
//! Everything here is rebuilt from first principles on plain arrays and
//! tuples: complex arithmetic on `(f64, f64)`, dense matrices as nested
//! `Vec`s, Lorentz boosts as explicit 4x4 matrices. None of the library's
//! matrix or kinematics machinery is used, so agreement between these
//! functions and the library is a genuine two-path check.

#![allow(dead_code)]

pub type C = (f64, f64);
pub type Mat = Vec<Vec<C>>;

pub fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

pub fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn conj(a: C) -> C {
    (a.0, -a.1)
}

pub fn zeros(n: usize) -> Mat {
    vec![vec![(0.0, 0.0); n]; n]
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for r in 0..n {
        for k in 0..n {
            let mut acc = (0.0, 0.0);
            for j in 0..n {
                acc = cadd(acc, cmul(a[r][j], b[j][k]));
            }
            out[r][k] = acc;
        }
    }
    out
}

pub fn mat_scale(a: &Mat, s: f64) -> Mat {
    a.iter().map(|row| row.iter().map(|&(re, im)| (re * s, im * s)).collect()).collect()
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| cadd(x, y)).collect())
        .collect()
}

pub fn trace(a: &Mat) -> C {
    let mut t = (0.0, 0.0);
    for (r, row) in a.iter().enumerate() {
        t = cadd(t, row[r]);
    }
    t
}

/// Kronecker product with the left factor as the most significant block.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (na, nb) = (a.len(), b.len());
    let mut out = zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            for r in 0..nb {
                for s in 0..nb {
                    out[i * nb + r][j * nb + s] = cmul(a[i][j], b[r][s]);
                }
            }
        }
    }
    out
}

/// 2x2 density matrix (I + b.sigma)/2 written out entrywise.
pub fn bloch_matrix(b: [f64; 3]) -> Mat {
    let [x, y, z] = b;
    vec![
        vec![((1.0 + z) / 2.0, 0.0), (x / 2.0, -y / 2.0)],
        vec![(x / 2.0, y / 2.0), ((1.0 - z) / 2.0, 0.0)],
    ]
}

/// Bloch vector of a 2x2 density matrix: b_k = Re tr(rho sigma_k).
pub fn bloch_of(m: &Mat) -> [f64; 3] {
    let x = m[0][1].0 + m[1][0].0;
    let y = m[1][0].1 - m[0][1].1;
    let z = m[0][0].0 - m[1][1].0;
    [x, y, z]
}

/// Bell state vectors in |q0 q1> product order, indexed
/// 0: (|01>-|10>)/sqrt2, 1: (|01>+|10>)/sqrt2,
/// 2: (|00>-|11>)/sqrt2, 3: (|00>+|11>)/sqrt2.
pub fn bell_vector(k: usize) -> [C; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match k {
        0 => [(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, 0.0)],
        1 => [(0.0, 0.0), (h, 0.0), (h, 0.0), (0.0, 0.0)],
        2 => [(h, 0.0), (0.0, 0.0), (0.0, 0.0), (-h, 0.0)],
        3 => [(h, 0.0), (0.0, 0.0), (0.0, 0.0), (h, 0.0)],
        _ => panic!("four Bell states"),
    }
}

pub fn outer4(v: &[C; 4]) -> Mat {
    let mut m = zeros(4);
    for r in 0..4 {
        for k in 0..4 {
            m[r][k] = cmul(v[r], conj(v[k]));
        }
    }
    m
}

/// Channel state with weight `f` on the singlet and (1-f)/3 on each of the
/// three triplet Bell projectors, built by summing the four projectors.
pub fn werner_matrix(f: f64) -> Mat {
    let mut m = mat_scale(&outer4(&bell_vector(0)), f);
    for k in 1..4 {
        m = mat_add(&m, &mat_scale(&outer4(&bell_vector(k)), (1.0 - f) / 3.0));
    }
    m
}

/// 8x8 projector onto Bell state `k` of qubits (0,1), identity on qubit 2.
/// Basis index is q0*4 + q1*2 + q2 (qubit 0 most significant).
pub fn bell_projector8(k: usize) -> Mat {
    let v = bell_vector(k);
    let mut m = zeros(8);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let amp = cmul(v[a * 2 + b], conj(v[a2 * 2 + b2]));
                    for q2 in 0..2 {
                        m[a * 4 + b * 2 + q2][a2 * 4 + b2 * 2 + q2] = amp;
                    }
                }
            }
        }
    }
    m
}

/// Traces qubits 0 and 1 out of an 8x8 matrix, leaving the 2x2 state of
/// qubit 2 (the least significant bit).
pub fn reduce_to_qubit2(m: &Mat) -> Mat {
    let mut out = zeros(2);
    for c1 in 0..2 {
        for c2 in 0..2 {
            let mut acc = (0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc = cadd(acc, m[a * 4 + b * 2 + c1][a * 4 + b * 2 + c2]);
                }
            }
            out[c1][c2] = acc;
        }
    }
    out
}

/// One Bell branch of the teleportation protocol, computed entirely with
/// the brute-force primitives above.
pub struct TeleportBranch {
    pub probability: f64,
    /// Reduced 2x2 state of the receiving qubit, present when the branch
    /// probability is large enough to renormalize.
    pub output: Option<Mat>,
}

/// Projects input (x) channel onto Bell state `k` of qubits (0,1) and
/// reduces the renormalized remainder to the receiving qubit.
pub fn teleport_branch(input_bloch: [f64; 3], singlet_fraction: f64, k: usize) -> TeleportBranch {
    let rho = kron(&bloch_matrix(input_bloch), &werner_matrix(singlet_fraction));
    let p8 = bell_projector8(k);
    let projected = mat_mul(&p8, &rho);
    let probability = trace(&projected).0;
    if probability <= 1e-14 {
        return TeleportBranch { probability, output: None };
    }
    let collapsed = mat_scale(&mat_mul(&projected, &p8), 1.0 / probability);
    TeleportBranch { probability, output: Some(reduce_to_qubit2(&collapsed)) }
}

/// Overlap <psi|rho|psi> of a 2x2 state with the pure state of a unit Bloch
/// vector, via Re tr(rho |psi><psi|).
pub fn overlap_with_pure(rho: &Mat, unit_bloch: [f64; 3]) -> f64 {
    trace(&mat_mul(rho, &bloch_matrix(unit_bloch))).0
}

// ---------------------------------------------------------------------------
// Relativistic kinematics by explicit four-vectors and boost matrices.
// ---------------------------------------------------------------------------

const ORACLE_PROTON_MASS_MEV: f64 = 938.272;

type FourVec = [f64; 4]; // (E, px, py, pz)

fn boost_z(gamma: f64, beta: f64) -> [[f64; 4]; 4] {
    [
        [gamma, 0.0, 0.0, gamma * beta],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [gamma * beta, 0.0, 0.0, gamma],
    ]
}

fn apply(m: &[[f64; 4]; 4], v: &FourVec) -> FourVec {
    let mut out = [0.0; 4];
    for (r, row) in m.iter().enumerate() {
        out[r] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

pub struct ElasticOracle {
    pub t_out_mev: f64,
    pub t_recoil_mev: f64,
    pub theta_lab_out_deg: f64,
    pub theta_lab_recoil_deg: f64,
    pub beta_out: f64,
    pub beta_recoil: f64,
}

/// Equal-mass elastic scattering solved by boosting explicit four-vectors:
/// beam + target into the center of momentum, rotate the outgoing pair by
/// the scattering angle, boost back.
pub fn elastic_oracle(t_beam_mev: f64, theta_cm_deg: f64) -> ElasticOracle {
    let m = ORACLE_PROTON_MASS_MEV;
    let e_beam = m + t_beam_mev;
    let p_beam = (e_beam * e_beam - m * m).sqrt();

    // Invariant mass of the pair fixes the frame change.
    let s = (e_beam + m) * (e_beam + m) - p_beam * p_beam;
    let gamma = (e_beam + m) / s.sqrt();
    let beta = p_beam / (e_beam + m);

    // Outgoing four-vectors in the center of momentum.
    let e_star = s.sqrt() / 2.0;
    let p_star = (e_star * e_star - m * m).sqrt();
    let theta = theta_cm_deg.to_radians();
    let out_cm: FourVec = [e_star, p_star * theta.sin(), 0.0, p_star * theta.cos()];
    let recoil_cm: FourVec = [e_star, -p_star * theta.sin(), 0.0, -p_star * theta.cos()];

    let to_lab = boost_z(gamma, beta);
    let out = apply(&to_lab, &out_cm);
    let recoil = apply(&to_lab, &recoil_cm);

    let momentum = |v: &FourVec| (v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt();
    let angle_deg = |v: &FourVec| {
        let transverse = (v[1] * v[1] + v[2] * v[2]).sqrt();
        transverse.atan2(v[3]).to_degrees()
    };
    ElasticOracle {
        t_out_mev: out[0] - m,
        t_recoil_mev: recoil[0] - m,
        theta_lab_out_deg: angle_deg(&out),
        theta_lab_recoil_deg: angle_deg(&recoil),
        beta_out: momentum(&out) / out[0],
        beta_recoil: momentum(&recoil) / recoil[0],
    }
}
