//! Parameterized recipes for the negative Sasakian constructions, plus
//! searches over parameters for a prescribed second homology.
//!
//! Each builder validates the construction hypotheses (named checks, so a
//! rejected parameter point produces a certificate naming the violated
//! condition), assembles the orbifold, and declares the primitivity target
//! for the Seifert solver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{rat, rat_int, Rational};
use crate::error::{Error, Result};
use crate::models::{cp2_blowup_model, cubic_tangent_model, elliptic_model, hirzebruch_model};
use crate::orbifold::{BranchComponent, OrbifoldSurface};
use crate::seifert::{certify, solve_seifert, Certificate, Check, TargetSpec};
use crate::surface::DivisorClass;

/// Parameters of one construction family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    Hirzebruch {
        n: i64,
        s: usize,
        m_list: Vec<i64>,
    },
    Cubic {
        m: i64,
        s: usize,
        m_list: Vec<i64>,
    },
    Elliptic {
        #[serde(rename = "N")]
        big_n: i64,
        n: i64,
    },
    Cp2One {
        s: usize,
        m_list: Vec<i64>,
    },
    Cp2Two {
        m1: i64,
        m2: i64,
        m3: i64,
    },
    Cp2Three {
        m1: i64,
        m2: i64,
        m3: i64,
    },
}

impl FamilyParams {
    pub fn family_name(&self) -> &'static str {
        match self {
            FamilyParams::Hirzebruch { .. } => "hirzebruch",
            FamilyParams::Cubic { .. } => "cubic",
            FamilyParams::Elliptic { .. } => "elliptic",
            FamilyParams::Cp2One { .. } => "cp2_one",
            FamilyParams::Cp2Two { .. } => "cp2_two",
            FamilyParams::Cp2Three { .. } => "cp2_three",
        }
    }
}

/// Finite abelian group in canonical invariant-factor form: divisibility
/// chain `d_1 | d_2 | ...`, stored as ascending `(modulus, exponent)` pairs
/// with equal moduli merged. Two inputs describing isomorphic groups
/// canonicalize identically (e.g. `Z_2^2 + Z_3^2` and `Z_6^2`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TorsionGroup {
    factors: Vec<(i64, u64)>,
}

fn factorize(mut m: i64) -> Vec<(i64, u32)> {
    let mut factors = Vec::new();
    let mut p = 2i64;
    while p * p <= m {
        if m % p == 0 {
            let mut a = 0u32;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            factors.push((p, a));
        }
        p += 1;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    factors
}

impl TorsionGroup {
    pub fn trivial() -> TorsionGroup {
        TorsionGroup { factors: vec![] }
    }

    /// Canonicalize a direct sum `+ Z_m^e` given as `(m, e)` summands.
    pub fn new(summands: &[(i64, u64)]) -> Result<TorsionGroup> {
        use std::collections::BTreeMap;
        let mut per_prime: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
        for &(m, e) in summands {
            if m < 2 {
                return Err(Error::InvalidArgument(format!(
                    "torsion modulus must be >= 2, got {m}"
                )));
            }
            if e == 0 {
                continue;
            }
            for (p, a) in factorize(m) {
                let list = per_prime.entry(p).or_default();
                for _ in 0..e {
                    list.push(a);
                }
            }
        }
        for list in per_prime.values_mut() {
            list.sort_unstable_by(|a, b| b.cmp(a));
        }
        let columns = per_prime.values().map(|l| l.len()).max().unwrap_or(0);
        // Invariant factors, largest first; exponent lists are descending so
        // the divisibility chain holds by construction.
        let mut invariants = Vec::with_capacity(columns);
        for j in 0..columns {
            let mut d = 1i64;
            for (p, list) in &per_prime {
                if let Some(&a) = list.get(j) {
                    d = d
                        .checked_mul(p.checked_pow(a).ok_or_else(|| {
                            Error::InvalidArgument("torsion modulus overflow".into())
                        })?)
                        .ok_or_else(|| Error::InvalidArgument("torsion modulus overflow".into()))?;
                }
            }
            invariants.push(d);
        }
        invariants.reverse(); // ascending
        let mut factors: Vec<(i64, u64)> = Vec::new();
        for d in invariants {
            match factors.last_mut() {
                Some((m, e)) if *m == d => *e += 1,
                _ => factors.push((d, 1)),
            }
        }
        Ok(TorsionGroup { factors })
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Ascending `(modulus, exponent)` pairs of the invariant-factor form.
    pub fn factors(&self) -> &[(i64, u64)] {
        &self.factors
    }

    /// Prime-power splitting `(p^a, count)`, the form entering the
    /// connected-sum decomposition of simply connected 5-manifolds.
    pub fn prime_power_form(&self) -> Vec<(i64, u64)> {
        use std::collections::BTreeMap;
        let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
        for &(m, e) in &self.factors {
            for (p, a) in factorize(m) {
                *counts.entry(p.pow(a)).or_default() += e;
            }
        }
        counts.into_iter().collect()
    }

    pub fn total_order(&self) -> BigInt {
        let mut order = BigInt::one();
        for &(m, e) in &self.factors {
            for _ in 0..e {
                order *= BigInt::from(m);
            }
        }
        order
    }

    /// Parse `"0"` or a comma-separated list of `Z_m^e` (exponent optional).
    pub fn parse(text: &str) -> Result<TorsionGroup> {
        let text = text.trim();
        if text == "0" || text.is_empty() {
            return Ok(TorsionGroup::trivial());
        }
        let mut summands = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let body = part
                .strip_prefix("Z_")
                .or_else(|| part.strip_prefix("z_"))
                .ok_or_else(|| {
                    Error::InvalidInput(format!("torsion summand {part} must look like Z_m^e"))
                })?;
            let (m_str, e_str) = match body.split_once('^') {
                Some((m, e)) => (m, e),
                None => (body, "1"),
            };
            let m: i64 = m_str
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad torsion modulus in {part}")))?;
            let e: u64 = e_str
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad torsion exponent in {part}")))?;
            if m < 2 || e == 0 {
                return Err(Error::InvalidInput(format!(
                    "torsion summand {part} needs m >= 2 and e >= 1"
                )));
            }
            summands.push((m, e));
        }
        TorsionGroup::new(&summands)
    }
}

impl std::fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(m, e)| format!("Z_{m}^{e}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Outcome of building one family member: the named hypothesis checks, and
/// the orbifold plus solver target when every hypothesis holds.
pub struct BuildAttempt {
    pub checks: Vec<Check>,
    pub product: Option<BuildProduct>,
}

pub struct BuildProduct {
    pub orbifold: OrbifoldSurface,
    pub target: TargetSpec,
    pub assumptions: Vec<String>,
}

impl BuildAttempt {
    fn rejected(&self) -> bool {
        self.product.is_none()
    }
}

fn check_condition(checks: &mut Vec<Check>, name: &str, ok: bool, detail: String) -> bool {
    if ok {
        checks.push(Check::pass(name, detail));
    } else {
        checks.push(Check::fail(name, detail));
    }
    ok
}

fn pairwise_coprime(m_list: &[i64]) -> std::result::Result<(), (i64, i64)> {
    for (i, &a) in m_list.iter().enumerate() {
        for &b in &m_list[i + 1..] {
            if a.gcd(&b) != 1 {
                return Err((a, b));
            }
        }
    }
    Ok(())
}

fn validate_multiplicities(m_list: &[i64]) -> Result<()> {
    for &m in m_list {
        if m < 2 {
            return Err(Error::InvalidInput(format!(
                "branch multiplicities must be >= 2, got {m}"
            )));
        }
    }
    Ok(())
}

fn deficiency_sum(m_list: &[i64]) -> Rational {
    m_list
        .iter()
        .map(|&m| rat_int(1) - rat(1, m))
        .fold(rat_int(0), |acc, x| acc + x)
}

/// Contraction of a Hirzebruch surface with branch divisor
/// `D = C + 2 E0` (multiplicity 2, genus n) and `s` disjoint sections
/// `D_i = E0` of multiplicity `m_i`. Certified target: `[C]`.
pub fn build_hirzebruch(n: i64, s: usize, m_list: &[i64]) -> Result<BuildAttempt> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("hirzebruch needs n >= 1, got {n}")));
    }
    if s != m_list.len() {
        return Err(Error::InvalidInput(format!(
            "s = {s} does not match the {} multiplicities given",
            m_list.len()
        )));
    }
    validate_multiplicities(m_list)?;

    let mut checks = Vec::new();
    let mut ok = true;
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_odd",
        m_list.iter().all(|&m| m % 2 == 1),
        format!("branch multiplicities {m_list:?} must be coprime to m = 2"),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_pairwise_coprime",
        pairwise_coprime(m_list).is_ok(),
        format!("branch multiplicities {m_list:?} pairwise coprime"),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_coprime_to_n",
        m_list.iter().all(|&m| m.gcd(&n) == 1),
        format!("gcd(m_i, n) = 1 required for surjectivity, n = {n}, m_list = {m_list:?}"),
    );
    // K^orb coefficient on [C]: -3/2 + n sum (1 - 1/m_i).
    let coefficient = rat(-3, 2) + rat_int(n) * deficiency_sum(m_list);
    ok &= check_condition(
        &mut checks,
        "hypothesis_negativity",
        coefficient > rat_int(0),
        format!("K^orb coefficient -3/2 + n*sum(1 - 1/m_i) = {coefficient}"),
    );
    if !ok {
        return Ok(BuildAttempt {
            checks,
            product: None,
        });
    }

    let surface = hirzebruch_model(n)?;
    let name = surface.model.name.clone();
    let mut branch = vec![BranchComponent {
        label: "D".into(),
        class: DivisorClass::from_integers(&name, &[1, 2]),
        multiplicity: 2,
        genus: n,
    }];
    for (i, &m) in m_list.iter().enumerate() {
        branch.push(BranchComponent {
            label: format!("D{}", i + 1),
            class: DivisorClass::from_integers(&name, &[0, 1]),
            multiplicity: m,
            genus: 0,
        });
    }
    let orbifold = OrbifoldSurface::new(surface, branch, vec![])?;
    Ok(BuildAttempt {
        checks,
        product: Some(BuildProduct {
            orbifold,
            target: TargetSpec::FullVector(vec![BigInt::one()]),
            assumptions: vec![
                "existence: a smooth member D of |C + 2 E0| exists (the class is very ample)"
                    .to_string(),
                "existence: the sections D_i and D intersect each other transversally".to_string(),
            ],
        }),
    })
}

/// The cubic-with-tangent-line contraction with branch divisor
/// `(1 - 1/m) Cbar + sum (1 - 1/m_i) L_i` over generic lines `L_i`.
/// Certified target: `[Ebar]`.
pub fn build_cubic(m: i64, s: usize, m_list: &[i64]) -> Result<BuildAttempt> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("cubic needs m >= 2, got {m}")));
    }
    if s != m_list.len() {
        return Err(Error::InvalidInput(format!(
            "s = {s} does not match the {} multiplicities given",
            m_list.len()
        )));
    }
    validate_multiplicities(m_list)?;

    let mut checks = Vec::new();
    let mut ok = true;
    ok &= check_condition(
        &mut checks,
        "hypothesis_gcd_m_7",
        m.gcd(&7) == 1,
        format!("gcd(m, 7) = {} (the class of Cbar is 7 Ebar)", m.gcd(&7)),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_s_min",
        s >= 2,
        format!("s = {s}, need at least 2 auxiliary lines"),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_pairwise_coprime",
        pairwise_coprime(m_list).is_ok(),
        format!("line multiplicities {m_list:?} pairwise coprime"),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_coprime_to_m",
        m_list.iter().all(|&mi| mi.gcd(&m) == 1),
        format!("gcd(m_i, m) = 1 for m = {m}, m_list = {m_list:?}"),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_coprime_to_3",
        m_list.iter().all(|&mi| mi % 3 != 0),
        format!("gcd(m_i, 3) = 1 (lines have class 3 Ebar), m_list = {m_list:?}"),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_coprime_to_7",
        m_list.iter().all(|&mi| mi % 7 != 0),
        format!("gcd(m_i, 7) = 1, m_list = {m_list:?}"),
    );
    let coefficient = rat_int(-6)
        + rat_int(7) * (rat_int(1) - rat(1, m))
        + rat_int(3) * deficiency_sum(m_list);
    ok &= check_condition(
        &mut checks,
        "hypothesis_negativity",
        coefficient > rat_int(0),
        format!("K^orb coefficient -6 + 7(1 - 1/m) + 3 sum(1 - 1/m_i) = {coefficient}"),
    );
    if !ok {
        return Ok(BuildAttempt {
            checks,
            product: None,
        });
    }

    let surface = cubic_tangent_model()?;
    let name = surface.model.name.clone();
    let mut branch = vec![BranchComponent {
        label: "Cbar".into(),
        class: DivisorClass::from_integers(&name, &[3, -1, -1, 0]),
        multiplicity: m,
        genus: 1,
    }];
    for (i, &mi) in m_list.iter().enumerate() {
        branch.push(BranchComponent {
            label: format!("L{}", i + 1),
            class: DivisorClass::from_integers(&name, &[1, 0, 0, 0]),
            multiplicity: mi,
            genus: 0,
        });
    }
    let orbifold = OrbifoldSurface::new(surface, branch, vec![])?;
    Ok(BuildAttempt {
        checks,
        product: Some(BuildProduct {
            orbifold,
            target: TargetSpec::FullVector(vec![BigInt::one()]),
            assumptions: vec![
                "existence: a smooth plane cubic with a tangent line in the stated configuration"
                    .to_string(),
                "existence: the auxiliary lines are generic (transversal to everything)"
                    .to_string(),
            ],
        }),
    })
}

/// Contraction of the section-plus-fiber-components chain on an elliptic
/// surface; no branch divisor. Certified target: the declared primitive
/// generator `[Fbar]` of the rank-one lattice.
pub fn build_elliptic(big_n: i64, n: i64) -> Result<BuildAttempt> {
    if big_n < 2 {
        return Err(Error::InvalidInput(format!(
            "elliptic needs N >= 2, got {big_n}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidInput(format!("elliptic needs n >= 1, got {n}")));
    }
    let mut checks = Vec::new();
    let mut ok = true;
    let d = (big_n - 1) * n + 1;
    ok &= check_condition(
        &mut checks,
        "hypothesis_negativity",
        big_n >= 3,
        format!("K^orb . Fbar = (N-2)n/d = {}", rat((big_n - 2) * n, d)),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_fiber_bound",
        n <= 10 * big_n - 1,
        format!("n = {n} must satisfy n <= 10N - 1 = {}", 10 * big_n - 1),
    );
    if !ok {
        return Ok(BuildAttempt {
            checks,
            product: None,
        });
    }
    let surface = elliptic_model(big_n, n)?;
    let orbifold = OrbifoldSurface::new(surface, vec![], vec![])?;
    Ok(BuildAttempt {
        checks,
        product: Some(BuildProduct {
            orbifold,
            target: TargetSpec::FullVector(vec![BigInt::one()]),
            assumptions: vec![
                format!(
                    "existence: an elliptic surface with section, Euler characteristic {}, a \
                     fiber of type I_{n}, and Picard number {}",
                    12 * big_n,
                    n + 1
                ),
                "primitive_generator: [Fbar] is declared the primitive generator of \
                 H^2(X - P, Z) on the algebraic ray (fixture)"
                    .to_string(),
            ],
        }),
    })
}

/// Smooth orbifold on the one-point blow-up of the plane with `s` general
/// conics through the blown-up point. Certified target: the `[L]`
/// coordinate of `mu * c1(M)` equals 1 (the nef basis is `(L - E, L)`).
pub fn build_cp2_one(s: usize, m_list: &[i64]) -> Result<BuildAttempt> {
    if s != m_list.len() {
        return Err(Error::InvalidInput(format!(
            "s = {s} does not match the {} multiplicities given",
            m_list.len()
        )));
    }
    validate_multiplicities(m_list)?;
    let mut checks = Vec::new();
    let mut ok = true;
    ok &= check_condition(
        &mut checks,
        "hypothesis_s_min",
        s >= 3,
        format!("s = {s}, need at least 3 conics (each deficiency term is < 1)"),
    );
    ok &= check_condition(
        &mut checks,
        "hypothesis_m_i_pairwise_coprime",
        pairwise_coprime(m_list).is_ok(),
        format!("conic multiplicities {m_list:?} pairwise coprime"),
    );
    let sum = deficiency_sum(m_list);
    ok &= check_condition(
        &mut checks,
        "hypothesis_negativity",
        sum > rat_int(2),
        format!("sum(1 - 1/m_i) = {sum}, need > 2 for K^orb . (L - E) > 0"),
    );
    if !ok {
        return Ok(BuildAttempt {
            checks,
            product: None,
        });
    }
    let surface = cp2_blowup_model(1)?;
    let name = surface.model.name.clone();
    let branch = m_list
        .iter()
        .enumerate()
        .map(|(i, &m)| BranchComponent {
            label: format!("C{}", i + 1),
            class: DivisorClass::from_integers(&name, &[2, -1]),
            multiplicity: m,
            genus: 0,
        })
        .collect();
    let orbifold = OrbifoldSurface::new(surface, branch, vec![])?;
    Ok(BuildAttempt {
        checks,
        product: Some(BuildProduct {
            orbifold,
            target: TargetSpec::PrescribedCoord {
                index: 1,
                value: BigInt::one(),
            },
            assumptions: vec![
                "existence: general conics through the blown-up point, pairwise transversal"
                    .to_string(),
            ],
        }),
    })
}

fn cp2_pair_conditions(checks: &mut Vec<Check>, m_list: &[i64; 3]) -> bool {
    let mut ok = check_condition(
        checks,
        "hypothesis_m_i_pairwise_coprime",
        pairwise_coprime(m_list).is_ok(),
        format!("multiplicities {m_list:?} pairwise coprime"),
    );
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let all_pairs = pairs.iter().all(|&(i, j)| {
        rat(1, m_list[i]) + rat(1, m_list[j]) < rat_int(1)
    });
    ok &= check_condition(
        checks,
        "hypothesis_reciprocal_pairs",
        all_pairs,
        format!("1/m_i + 1/m_j < 1 required for every pair, m_list = {m_list:?}"),
    );
    ok
}

/// Two-point blow-up with the mixed conic configuration
/// `2L - E, 2L - E', 2L - E - E'`. The all-(2L - E - E') configuration
/// fails ampleness against the ray `L - E - E'`, which is why the mixed
/// choice is used. Primitivity is arranged by a minimal background
/// adjustment on the `L` coordinate.
pub fn build_cp2_two(m1: i64, m2: i64, m3: i64) -> Result<BuildAttempt> {
    let m_list = [m1, m2, m3];
    validate_multiplicities(&m_list)?;
    let mut checks = Vec::new();
    let ok = cp2_pair_conditions(&mut checks, &m_list);
    if !ok {
        return Ok(BuildAttempt {
            checks,
            product: None,
        });
    }
    let surface = cp2_blowup_model(2)?;
    let name = surface.model.name.clone();
    let classes = [[2i64, -1, 0], [2, 0, -1], [2, -1, -1]];
    let branch = classes
        .iter()
        .zip(&m_list)
        .enumerate()
        .map(|(i, (coords, &m))| BranchComponent {
            label: format!("C{}", i + 1),
            class: DivisorClass::from_integers(&name, coords),
            multiplicity: m,
            genus: 0,
        })
        .collect();
    let orbifold = OrbifoldSurface::new(surface, branch, vec![])?;
    Ok(BuildAttempt {
        checks,
        product: Some(BuildProduct {
            orbifold,
            target: TargetSpec::GcdOnly { adjust_index: 0 },
            assumptions: vec![
                "existence: conics in the stated configuration with generic transversal \
                 intersections"
                    .to_string(),
            ],
        }),
    })
}

/// Three-point blow-up with one conic through each pair of points:
/// `2L - E - E', 2L - E' - E'', 2L - E - E''`.
pub fn build_cp2_three(m1: i64, m2: i64, m3: i64) -> Result<BuildAttempt> {
    let m_list = [m1, m2, m3];
    validate_multiplicities(&m_list)?;
    let mut checks = Vec::new();
    let ok = cp2_pair_conditions(&mut checks, &m_list);
    if !ok {
        return Ok(BuildAttempt {
            checks,
            product: None,
        });
    }
    let surface = cp2_blowup_model(3)?;
    let name = surface.model.name.clone();
    let classes = [[2i64, -1, -1, 0], [2, 0, -1, -1], [2, -1, 0, -1]];
    let branch = classes
        .iter()
        .zip(&m_list)
        .enumerate()
        .map(|(i, (coords, &m))| BranchComponent {
            label: format!("C{}", i + 1),
            class: DivisorClass::from_integers(&name, coords),
            multiplicity: m,
            genus: 0,
        })
        .collect();
    let orbifold = OrbifoldSurface::new(surface, branch, vec![])?;
    Ok(BuildAttempt {
        checks,
        product: Some(BuildProduct {
            orbifold,
            target: TargetSpec::GcdOnly { adjust_index: 0 },
            assumptions: vec![
                "existence: one conic through each pair of blown-up points, other intersections \
                 generic and transversal"
                    .to_string(),
            ],
        }),
    })
}

pub fn build(params: &FamilyParams) -> Result<BuildAttempt> {
    match params {
        FamilyParams::Hirzebruch { n, s, m_list } => build_hirzebruch(*n, *s, m_list),
        FamilyParams::Cubic { m, s, m_list } => build_cubic(*m, *s, m_list),
        FamilyParams::Elliptic { big_n, n } => build_elliptic(*big_n, *n),
        FamilyParams::Cp2One { s, m_list } => build_cp2_one(*s, m_list),
        FamilyParams::Cp2Two { m1, m2, m3 } => build_cp2_two(*m1, *m2, *m3),
        FamilyParams::Cp2Three { m1, m2, m3 } => build_cp2_three(*m1, *m2, *m3),
    }
}

/// Full construction pipeline for one parameter point: hypothesis checks,
/// orbifold assembly, Seifert solving, and certificate assembly.
pub struct ConstructionOutcome {
    pub params: FamilyParams,
    pub certificate: Certificate,
    pub orbifold: Option<OrbifoldSurface>,
    pub target: Option<TargetSpec>,
}

pub fn construct(params: &FamilyParams) -> Result<ConstructionOutcome> {
    let attempt = build(params)?;
    if attempt.rejected() {
        return Ok(ConstructionOutcome {
            params: params.clone(),
            certificate: Certificate::rejected_from(attempt.checks, vec![]),
            orbifold: None,
            target: None,
        });
    }
    let product = attempt.product.expect("checked above");
    let mut checks = attempt.checks;
    match solve_seifert(&product.orbifold, &product.target) {
        Ok(data) => {
            checks.push(Check::pass(
                "seifert_solvable",
                "Bezout system for the primitivity target solved within ranges",
            ));
            let certificate = certify(
                &product.orbifold,
                &data,
                &product.target,
                &checks,
                product.assumptions.clone(),
            );
            Ok(ConstructionOutcome {
                params: params.clone(),
                certificate,
                orbifold: Some(product.orbifold),
                target: Some(product.target),
            })
        }
        Err(Error::Unsolvable(msg)) => {
            checks.push(Check::fail("seifert_solvable", msg));
            Ok(ConstructionOutcome {
                params: params.clone(),
                certificate: Certificate::rejected_from(checks, product.assumptions),
                orbifold: Some(product.orbifold),
                target: Some(product.target),
            })
        }
        Err(other) => Err(other),
    }
}

/// Re-run certification against embedded Seifert data (used by `verify`).
pub fn recertify(
    params: &FamilyParams,
    data: &crate::seifert::SeifertData,
) -> Result<ConstructionOutcome> {
    let attempt = build(params)?;
    if attempt.rejected() {
        return Ok(ConstructionOutcome {
            params: params.clone(),
            certificate: Certificate::rejected_from(attempt.checks, vec![]),
            orbifold: None,
            target: None,
        });
    }
    let product = attempt.product.expect("checked above");
    let mut checks = attempt.checks;
    checks.push(Check::pass(
        "seifert_solvable",
        "Bezout system for the primitivity target solved within ranges",
    ));
    let certificate = certify(
        &product.orbifold,
        data,
        &product.target,
        &checks,
        product.assumptions.clone(),
    );
    Ok(ConstructionOutcome {
        params: params.clone(),
        certificate,
        orbifold: Some(product.orbifold),
        target: Some(product.target),
    })
}

const ODD_PRIMES: [i64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// All `size`-subsets of `pool`, ordered by product (deterministic search
/// order for small certificates).
fn subsets_by_product(pool: &[i64], size: usize) -> Vec<Vec<i64>> {
    let mut result: Vec<Vec<i64>> = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn recurse(pool: &[i64], start: usize, size: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..pool.len() {
            current.push(pool[i]);
            recurse(pool, i + 1, size, current, out);
            current.pop();
        }
    }
    recurse(pool, 0, size, &mut current, &mut result);
    result.sort_by_key(|s| s.iter().product::<i64>());
    result
}

/// Certified construction of `#_k(S^2 x S^3)` for any `k >= 1`: the three
/// plane-blow-up recipes for `k = 1, 2, 3` and the elliptic contraction
/// with minimal `N >= 3` for `k >= 4`.
pub fn search_connected_sum(k: i64) -> Result<ConstructionOutcome> {
    if k < 1 {
        return Err(Error::InvalidInput(format!("k must be >= 1, got {k}")));
    }
    let params = match k {
        1 => {
            let m_list = first_cp2_one_triple()?;
            FamilyParams::Cp2One { s: 3, m_list }
        }
        2 | 3 => {
            let m_list = first_reciprocal_triple()?;
            if k == 2 {
                FamilyParams::Cp2Two {
                    m1: m_list[0],
                    m2: m_list[1],
                    m3: m_list[2],
                }
            } else {
                FamilyParams::Cp2Three {
                    m1: m_list[0],
                    m2: m_list[1],
                    m3: m_list[2],
                }
            }
        }
        _ => {
            // Minimal N >= 3 with k <= 12N - 4; then n = 12N - 3 - k.
            let mut big_n = 3;
            while 12 * big_n - 4 < k {
                big_n += 1;
            }
            FamilyParams::Elliptic {
                big_n,
                n: 12 * big_n - 3 - k,
            }
        }
    };
    let outcome = construct(&params)?;
    if !outcome.certificate.verified() {
        return Err(Error::ContractViolation(format!(
            "search produced a rejected certificate for k = {k}"
        )));
    }
    Ok(outcome)
}

fn first_cp2_one_triple() -> Result<Vec<i64>> {
    for candidate in subsets_by_product(&ODD_PRIMES, 3) {
        if deficiency_sum(&candidate) > rat_int(2) {
            return Ok(candidate);
        }
    }
    Err(Error::ContractViolation("no conic triple found".into()))
}

fn first_reciprocal_triple() -> Result<Vec<i64>> {
    for candidate in subsets_by_product(&ODD_PRIMES, 3) {
        let pairs = [(0, 1), (0, 2), (1, 2)];
        if pairs
            .iter()
            .all(|&(i, j)| rat(1, candidate[i]) + rat(1, candidate[j]) < rat_int(1))
        {
            return Ok(candidate);
        }
    }
    Err(Error::ContractViolation("no reciprocal triple found".into()))
}

/// Result of a torsion-target search.
pub enum SearchOutcome {
    Found(Box<ConstructionOutcome>),
    /// The implemented families do not reach this group; the reason explains
    /// which hypothesis blocks it.
    NotCovered { reason: String },
}

/// Search for a verified certificate with `H_2(M) = target` over the
/// rational-homology-sphere families: `Z_2^{2n}` through the Hirzebruch
/// recipe, `Z_m^2` through the cubic recipe. Enumeration is lexicographic in
/// `(s, product of m_list)` with multiplicities drawn from odd primes.
pub fn search_torsion(target: &TorsionGroup) -> Result<SearchOutcome> {
    let factors = target.factors();
    // Z_2^{2n}: single invariant factor (2, 2n).
    if let [(2, e)] = factors {
        if e % 2 == 0 {
            let n = (e / 2) as i64;
            return search_hirzebruch_torsion(n).map(SearchOutcome::found_or_not);
        }
    }
    // Z_m^2: single invariant factor (m, 2).
    if let [(m, 2)] = factors {
        if m % 7 == 0 {
            return Ok(SearchOutcome::NotCovered {
                reason: format!(
                    "Z_{m}^2 with 7 | m is outside the cubic recipe (gcd(m, 7) = 1 required)"
                ),
            });
        }
        return search_cubic_torsion(*m).map(SearchOutcome::found_or_not);
    }
    Ok(SearchOutcome::NotCovered {
        reason: format!(
            "torsion {target} is not of the form Z_2^(2n) or Z_m^2 realized by these \
             constructions; see the semi-regular classification for other groups"
        ),
    })
}

impl SearchOutcome {
    fn found_or_not(outcome: Option<ConstructionOutcome>) -> SearchOutcome {
        match outcome {
            Some(o) => SearchOutcome::Found(Box::new(o)),
            None => SearchOutcome::NotCovered {
                reason: "search exhausted its parameter pool".to_string(),
            },
        }
    }
}

fn search_hirzebruch_torsion(n: i64) -> Result<Option<ConstructionOutcome>> {
    for s in 1..=6usize {
        let pool: Vec<i64> = ODD_PRIMES.iter().copied().filter(|p| n % p != 0).collect();
        for m_list in subsets_by_product(&pool, s) {
            if rat(-3, 2) + rat_int(n) * deficiency_sum(&m_list) <= rat_int(0) {
                continue;
            }
            let params = FamilyParams::Hirzebruch { n, s, m_list };
            let outcome = construct(&params)?;
            if outcome.certificate.verified() {
                return Ok(Some(outcome));
            }
        }
    }
    Ok(None)
}

fn search_cubic_torsion(m: i64) -> Result<Option<ConstructionOutcome>> {
    for s in 2..=6usize {
        let pool: Vec<i64> = primes_for_cubic(m);
        for m_list in subsets_by_product(&pool, s) {
            let coefficient = rat_int(-6)
                + rat_int(7) * (rat_int(1) - rat(1, m))
                + rat_int(3) * deficiency_sum(&m_list);
            if coefficient <= rat_int(0) {
                continue;
            }
            let params = FamilyParams::Cubic { m, s, m_list };
            let outcome = construct(&params)?;
            if outcome.certificate.verified() {
                return Ok(Some(outcome));
            }
        }
    }
    Ok(None)
}

fn primes_for_cubic(m: i64) -> Vec<i64> {
    let small_primes: [i64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];
    small_primes
        .iter()
        .copied()
        .filter(|&p| p != 3 && p != 7 && m % p != 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::SasakiSign;
    use crate::seifert::homology;

    #[test]
    fn torsion_canonical_forms() {
        let a = TorsionGroup::new(&[(2, 2), (3, 2)]).unwrap();
        let b = TorsionGroup::new(&[(6, 2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Z_6^2");
        let c = TorsionGroup::new(&[(4, 1), (2, 1)]).unwrap();
        assert_eq!(c.factors(), &[(2, 1), (4, 1)]);
        assert_eq!(TorsionGroup::trivial().to_string(), "0");
        let d = TorsionGroup::new(&[(5, 2), (7, 6)]).unwrap();
        assert_eq!(d.factors(), &[(7, 4), (35, 2)]);
        assert_eq!(d.prime_power_form(), vec![(5, 2), (7, 6)]);
    }

    #[test]
    fn torsion_parse_round_trip() {
        for text in ["0", "Z_2^2", "Z_2^4,Z_3^2", "Z_35^2"] {
            let t = TorsionGroup::parse(text).unwrap();
            let back = TorsionGroup::parse(&t.to_string()).unwrap();
            assert_eq!(t, back);
        }
        assert!(TorsionGroup::parse("Q_5").is_err());
        assert!(TorsionGroup::parse("Z_1^2").is_err());
    }

    #[test]
    fn hirzebruch_family_examples() {
        // (n=1, s=3, (3,5,7)): verified, H_2 = Z_2^2.
        let outcome = construct(&FamilyParams::Hirzebruch {
            n: 1,
            s: 3,
            m_list: vec![3, 5, 7],
        })
        .unwrap();
        assert!(outcome.certificate.verified(), "{:?}", outcome.certificate.checks);
        assert_eq!(outcome.certificate.torsion.as_ref().unwrap().to_string(), "Z_2^2");
        assert_eq!(outcome.certificate.free_rank, Some(0));
        assert_eq!(outcome.certificate.sign, Some(SasakiSign::Negative));

        // (n=2, s=2, (3,5)): verified, Z_2^4.
        let outcome = construct(&FamilyParams::Hirzebruch {
            n: 2,
            s: 2,
            m_list: vec![3, 5],
        })
        .unwrap();
        assert!(outcome.certificate.verified());
        assert_eq!(outcome.certificate.torsion.as_ref().unwrap().to_string(), "Z_2^4");

        // (n=1, s=2, (3,5)): rejected by negativity (-3/2 + 22/15 < 0).
        let outcome = construct(&FamilyParams::Hirzebruch {
            n: 1,
            s: 2,
            m_list: vec![3, 5],
        })
        .unwrap();
        assert!(!outcome.certificate.verified());
        let failing: Vec<&str> = outcome
            .certificate
            .checks
            .iter()
            .filter(|c| c.verdict == crate::seifert::Verdict::Fail)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failing, vec!["hypothesis_negativity"]);
    }

    #[test]
    fn hirzebruch_coprime_to_n_rejection() {
        let outcome = construct(&FamilyParams::Hirzebruch {
            n: 3,
            s: 2,
            m_list: vec![3, 5],
        })
        .unwrap();
        assert!(!outcome.certificate.verified());
        assert!(outcome
            .certificate
            .checks
            .iter()
            .any(|c| c.name == "hypothesis_m_i_coprime_to_n"
                && c.verdict == crate::seifert::Verdict::Fail));
    }

    #[test]
    fn cubic_family_examples() {
        let outcome = construct(&FamilyParams::Cubic {
            m: 2,
            s: 2,
            m_list: vec![5, 11],
        })
        .unwrap();
        assert!(outcome.certificate.verified(), "{:?}", outcome.certificate.checks);
        assert_eq!(outcome.certificate.torsion.as_ref().unwrap().to_string(), "Z_2^2");

        let outcome = construct(&FamilyParams::Cubic {
            m: 4,
            s: 2,
            m_list: vec![5, 11],
        })
        .unwrap();
        assert!(outcome.certificate.verified());
        assert_eq!(outcome.certificate.torsion.as_ref().unwrap().to_string(), "Z_4^2");

        let outcome = construct(&FamilyParams::Cubic {
            m: 7,
            s: 2,
            m_list: vec![5, 11],
        })
        .unwrap();
        assert!(!outcome.certificate.verified());
        assert!(outcome
            .certificate
            .checks
            .iter()
            .any(|c| c.name == "hypothesis_gcd_m_7"
                && c.verdict == crate::seifert::Verdict::Fail));
    }

    #[test]
    fn elliptic_family_examples() {
        let outcome = construct(&FamilyParams::Elliptic { big_n: 3, n: 29 }).unwrap();
        assert!(outcome.certificate.verified());
        assert_eq!(outcome.certificate.free_rank, Some(4));
        assert_eq!(outcome.certificate.manifold.as_deref(), Some("#_4(S^2 x S^3)"));

        let outcome = construct(&FamilyParams::Elliptic { big_n: 3, n: 1 }).unwrap();
        assert_eq!(outcome.certificate.free_rank, Some(32));

        let outcome = construct(&FamilyParams::Elliptic { big_n: 2, n: 5 }).unwrap();
        assert!(!outcome.certificate.verified());
        assert!(outcome
            .certificate
            .checks
            .iter()
            .any(|c| c.name == "hypothesis_negativity"
                && c.verdict == crate::seifert::Verdict::Fail));
    }

    #[test]
    fn cp2_one_examples() {
        let outcome = construct(&FamilyParams::Cp2One {
            s: 3,
            m_list: vec![5, 7, 9],
        })
        .unwrap();
        assert!(outcome.certificate.verified(), "{:?}", outcome.certificate.checks);
        assert_eq!(outcome.certificate.free_rank, Some(1));
        assert_eq!(outcome.certificate.manifold.as_deref(), Some("S^2 x S^3"));

        let outcome = construct(&FamilyParams::Cp2One {
            s: 3,
            m_list: vec![2, 3, 5],
        })
        .unwrap();
        assert!(!outcome.certificate.verified()); // 1/2 + 2/3 + 4/5 < 2

        let outcome = construct(&FamilyParams::Cp2One {
            s: 2,
            m_list: vec![100, 101],
        })
        .unwrap();
        assert!(!outcome.certificate.verified()); // s >= 3 required
    }

    #[test]
    fn cp2_two_and_three_examples() {
        let outcome = construct(&FamilyParams::Cp2Two {
            m1: 3,
            m2: 4,
            m3: 5,
        })
        .unwrap();
        assert!(outcome.certificate.verified(), "{:?}", outcome.certificate.checks);
        assert_eq!(outcome.certificate.free_rank, Some(2));
        assert_eq!(outcome.certificate.manifold.as_deref(), Some("#_2(S^2 x S^3)"));

        let outcome = construct(&FamilyParams::Cp2Two {
            m1: 2,
            m2: 3,
            m3: 7,
        })
        .unwrap();
        assert!(outcome.certificate.verified());

        let outcome = construct(&FamilyParams::Cp2Two {
            m1: 2,
            m2: 3,
            m3: 4,
        })
        .unwrap();
        assert!(!outcome.certificate.verified());

        let outcome = construct(&FamilyParams::Cp2Three {
            m1: 3,
            m2: 4,
            m3: 5,
        })
        .unwrap();
        assert!(outcome.certificate.verified(), "{:?}", outcome.certificate.checks);
        assert_eq!(outcome.certificate.free_rank, Some(3));

        let outcome = construct(&FamilyParams::Cp2Three {
            m1: 2,
            m2: 3,
            m3: 5,
        })
        .unwrap();
        assert!(outcome.certificate.verified()); // all pairs: 5/6, 7/10, 8/15 < 1

        let outcome = construct(&FamilyParams::Cp2Three {
            m1: 2,
            m2: 2,
            m3: 3,
        })
        .unwrap();
        assert!(!outcome.certificate.verified());
    }

    #[test]
    fn search_connected_sum_examples() {
        let outcome = search_connected_sum(4).unwrap();
        match &outcome.params {
            FamilyParams::Elliptic { big_n, n } => {
                assert_eq!((*big_n, *n), (3, 29));
            }
            other => panic!("unexpected params {other:?}"),
        }
        let outcome = search_connected_sum(52).unwrap();
        match &outcome.params {
            FamilyParams::Elliptic { big_n, n } => {
                assert_eq!((*big_n, *n), (5, 5));
            }
            other => panic!("unexpected params {other:?}"),
        }
        let outcome = search_connected_sum(1).unwrap();
        assert_eq!(outcome.certificate.manifold.as_deref(), Some("S^2 x S^3"));
    }

    #[test]
    fn search_torsion_examples() {
        // Z_2^6 -> hirzebruch n = 3.
        match search_torsion(&TorsionGroup::parse("Z_2^6").unwrap()).unwrap() {
            SearchOutcome::Found(outcome) => {
                assert!(matches!(outcome.params, FamilyParams::Hirzebruch { n: 3, .. }));
                assert_eq!(
                    outcome.certificate.torsion.as_ref().unwrap().to_string(),
                    "Z_2^6"
                );
            }
            SearchOutcome::NotCovered { reason } => panic!("not covered: {reason}"),
        }
        // Z_3^2 -> cubic m = 3.
        match search_torsion(&TorsionGroup::parse("Z_3^2").unwrap()).unwrap() {
            SearchOutcome::Found(outcome) => {
                assert!(matches!(outcome.params, FamilyParams::Cubic { m: 3, .. }));
            }
            SearchOutcome::NotCovered { reason } => panic!("not covered: {reason}"),
        }
        // Z_7^2 blocked by the gcd(m, 7) hypothesis.
        match search_torsion(&TorsionGroup::parse("Z_7^2").unwrap()).unwrap() {
            SearchOutcome::NotCovered { reason } => assert!(reason.contains("7")),
            SearchOutcome::Found(_) => panic!("Z_7^2 must not be covered"),
        }
        // Z_5^4 is not of either form.
        match search_torsion(&TorsionGroup::parse("Z_5^4").unwrap()).unwrap() {
            SearchOutcome::NotCovered { .. } => {}
            SearchOutcome::Found(_) => panic!("Z_5^4 must not be covered"),
        }
    }

    #[test]
    fn homology_matches_family_targets() {
        let cases: Vec<(FamilyParams, i64, &str)> = vec![
            (
                FamilyParams::Hirzebruch {
                    n: 2,
                    s: 2,
                    m_list: vec![3, 5],
                },
                0,
                "Z_2^4",
            ),
            (
                FamilyParams::Cubic {
                    m: 3,
                    s: 2,
                    m_list: vec![2, 5],
                },
                0,
                "Z_3^2",
            ),
            (FamilyParams::Elliptic { big_n: 4, n: 10 }, 35, "0"),
            (
                FamilyParams::Cp2One {
                    s: 3,
                    m_list: vec![5, 7, 9],
                },
                1,
                "0",
            ),
        ];
        for (params, k, torsion) in cases {
            let outcome = construct(&params).unwrap();
            assert!(outcome.certificate.verified(), "{params:?}");
            let (free, t) = homology(
                outcome.orbifold.as_ref().unwrap(),
                &outcome.certificate.checks,
            )
            .unwrap();
            assert_eq!(free, k, "{params:?}");
            assert_eq!(t.to_string(), torsion, "{params:?}");
        }
    }
}
