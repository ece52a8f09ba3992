//! Branch divisors, orbifold canonical classes, orbifold adjunction, and
//! ampleness/negativity verdicts.
//!
//! An orbifold here is a contracted surface together with a branch divisor
//! `Delta = sum (1 - 1/m_i) D_i`. Validation checks the coprimality and
//! incidence hypotheses of the underlying existence results; violations of
//! the single-isotropy-surface hypothesis are warnings (the certificates
//! carry them verbatim), everything else is a failure.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{rat, rat_int, Rational};
use crate::error::{Error, Result};
use crate::surface::{ChainIncidence, ChainRelation, ContractedSurface, DivisorClass};

/// One component of the branch divisor. The genus is declared and re-checked
/// against adjunction on the resolved model at construction.
#[derive(Debug, Clone)]
pub struct BranchComponent {
    pub label: String,
    pub class: DivisorClass,
    pub multiplicity: i64,
    pub genus: i64,
}

/// A class with exact rational coordinates in the designated
/// `H^2(X - P)` basis of the orbifold's underlying surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDivisor {
    pub basis_labels: Vec<String>,
    pub coords: Vec<Rational>,
}

impl QDivisor {
    pub fn neg(&self) -> QDivisor {
        QDivisor {
            basis_labels: self.basis_labels.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Contracted surface plus branch divisor.
#[derive(Debug, Clone)]
pub struct OrbifoldSurface {
    pub surface: ContractedSurface,
    pub branch: Vec<BranchComponent>,
    /// Pairs of branch labels declared geometrically disjoint even though
    /// their homological intersection number is positive. Homology cannot
    /// see genericity choices; none of the built-in families need this.
    pub disjoint_overrides: Vec<(String, String)>,
}

impl OrbifoldSurface {
    pub fn new(
        surface: ContractedSurface,
        branch: Vec<BranchComponent>,
        disjoint_overrides: Vec<(String, String)>,
    ) -> Result<Self> {
        for component in &branch {
            if component.multiplicity <= 1 {
                return Err(Error::InvalidArgument(format!(
                    "branch component {} has multiplicity {}, need > 1",
                    component.label, component.multiplicity
                )));
            }
            let computed = surface.model.genus_smooth(&component.class)?;
            if computed != component.genus {
                return Err(Error::InvalidArgument(format!(
                    "branch component {} declares genus {} but adjunction gives {computed}",
                    component.label, component.genus
                )));
            }
        }
        Ok(OrbifoldSurface {
            surface,
            branch,
            disjoint_overrides,
        })
    }

    fn overridden(&self, a: &str, b: &str) -> bool {
        self.disjoint_overrides
            .iter()
            .any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    /// Incidence reports of every branch component against every chain.
    pub fn branch_incidence(&self) -> Result<Vec<(String, Vec<ChainIncidence>)>> {
        self.branch
            .iter()
            .map(|c| Ok((c.label.clone(), self.surface.incidence(&c.class)?)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone)]
pub struct CoprimalityEntry {
    pub first: String,
    pub second: String,
    pub intersection: BigInt,
    pub gcd: i64,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct OrbismoothEntry {
    pub component: String,
    pub point: String,
    pub relation: ChainRelation,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct IsotropyEntry {
    pub point: String,
    pub order: i64,
    pub incident_components: Vec<String>,
    /// Point multiplicity `m(x) = d(x) * prod m_i` over incident components.
    pub multiplicity: BigInt,
    pub outcome: CheckOutcome,
}

/// Result of [`validate`]: itemized verdicts plus flattened failure and
/// warning messages for certificates.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub coprimality: Vec<CoprimalityEntry>,
    pub orbismooth: Vec<OrbismoothEntry>,
    pub isotropy: Vec<IsotropyEntry>,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the orbifold hypotheses: branch components intersecting on the
/// resolved model must have coprime multiplicities; every component must be
/// orbismooth with respect to every chain it meets; and each singular point
/// should lie in at most one isotropy surface (violations are warnings, not
/// failures: the certificates record them and the existence of compatible
/// local invariants stays an explicit assumption).
pub fn validate(orbifold: &OrbifoldSurface) -> Result<ValidationReport> {
    let mut report = ValidationReport {
        coprimality: Vec::new(),
        orbismooth: Vec::new(),
        isotropy: Vec::new(),
        failures: Vec::new(),
        warnings: Vec::new(),
    };

    for (i, a) in orbifold.branch.iter().enumerate() {
        for b in orbifold.branch.iter().skip(i + 1) {
            // Intersection on the resolved model decides incidence.
            let resolved = orbifold.surface.model.intersect(&a.class, &b.class)?;
            if !resolved.is_integer() {
                return Err(Error::InvalidArgument(format!(
                    "branch components {} and {} have non-integral intersection",
                    a.label, b.label
                )));
            }
            let meets = resolved.is_positive() && !orbifold.overridden(&a.label, &b.label);
            let g = num_integer::gcd(a.multiplicity, b.multiplicity);
            let ok = !meets || g == 1;
            if !ok {
                report.failures.push(format!(
                    "components {} and {} intersect but gcd({}, {}) = {g}",
                    a.label, b.label, a.multiplicity, b.multiplicity
                ));
            }
            report.coprimality.push(CoprimalityEntry {
                first: a.label.clone(),
                second: b.label.clone(),
                intersection: resolved.to_integer(),
                gcd: g,
                ok,
            });
        }
    }

    let incidences = orbifold.branch_incidence()?;
    for (label, reports) in &incidences {
        for incidence in reports {
            let point = orbifold
                .surface
                .chain_singularity(incidence.chain_index)?;
            if !point.is_singular() {
                continue;
            }
            let ok = incidence.relation != ChainRelation::NotOrbismooth;
            if !ok {
                report.failures.push(format!(
                    "component {label} is not orbismooth at {}: pairings {:?}",
                    incidence.point_label,
                    incidence
                        .pairings
                        .iter()
                        .map(|(l, v)| format!("{l}:{v}"))
                        .collect::<Vec<_>>()
                ));
            }
            report.orbismooth.push(OrbismoothEntry {
                component: label.clone(),
                point: incidence.point_label.clone(),
                relation: incidence.relation,
                ok,
            });
        }
    }

    for point in orbifold.surface.singular_set() {
        let mut incident = Vec::new();
        let mut multiplicity = BigInt::from(point.d);
        for (label, reports) in &incidences {
            if reports[point.chain_index].meets() {
                incident.push(label.clone());
                let m = orbifold
                    .branch
                    .iter()
                    .find(|c| &c.label == label)
                    .map(|c| c.multiplicity)
                    .unwrap_or(1);
                multiplicity *= BigInt::from(m);
            }
        }
        let outcome = if incident.len() > 1 {
            report.warnings.push(format!(
                "singular point {} lies in {} isotropy surfaces ({}); the single-surface \
                 hypothesis of the local-invariant existence result is not literally met",
                point.label,
                incident.len(),
                incident.join(", ")
            ));
            CheckOutcome::Warn
        } else {
            CheckOutcome::Pass
        };
        report.isotropy.push(IsotropyEntry {
            point: point.label.clone(),
            order: point.d,
            incident_components: incident,
            multiplicity,
            outcome,
        });
    }

    Ok(report)
}

/// The orbifold canonical class `K^orb = K_X + sum (1 - 1/m_i) D_i`,
/// expressed exactly in the designated basis.
pub fn canonical_orb(orbifold: &OrbifoldSurface) -> Result<QDivisor> {
    let surface = &orbifold.surface;
    let mut coords = surface.expand_class(&surface.model.canonical)?;
    for component in &orbifold.branch {
        let weight = rat_int(1) - rat(1, component.multiplicity);
        let expansion = surface.expand_class(&component.class)?;
        for (acc, coeff) in coords.iter_mut().zip(&expansion) {
            *acc += &weight * coeff;
        }
    }
    Ok(QDivisor {
        basis_labels: surface.h2_minus_p.labels.clone(),
        coords,
    })
}

/// Negative orbifold Euler characteristic of an embedded curve:
/// `2g - 2 + sum_{x in curve cap P} (1 - 1/d(x))`, using the point orders
/// `d` (not the branch-augmented multiplicities). Returns the value together
/// with a flag telling whether the curve met every chain orbismoothly.
pub fn orb_euler_curve(
    orbifold: &OrbifoldSurface,
    curve: &DivisorClass,
    genus: i64,
) -> Result<(Rational, bool)> {
    let mut value = rat_int(2 * genus - 2);
    let mut orbismooth = true;
    for incidence in orbifold.surface.incidence(curve)? {
        let point = orbifold.surface.chain_singularity(incidence.chain_index)?;
        if !point.is_singular() || !incidence.meets() {
            continue;
        }
        if incidence.relation == ChainRelation::NotOrbismooth {
            orbismooth = false;
        }
        value += rat_int(1) - rat(1, point.d);
    }
    Ok((value, orbismooth))
}

/// Solves `K . curve + curve^2 = -chi_orb(curve)` for the canonical class of
/// a rank-one model, given a curve of known genus through its singular
/// points. Cross-checks the pull-back route used by [`canonical_orb`].
pub fn canonical_via_adjunction(
    orbifold: &OrbifoldSurface,
    curve: &DivisorClass,
    genus: i64,
) -> Result<QDivisor> {
    let surface = &orbifold.surface;
    if surface.h2_minus_p.rank() != 1 {
        return Err(Error::UnsupportedModel(
            "adjunction solve needs a rank-one designated basis".into(),
        ));
    }
    let curve_sq = surface.push_intersect(curve, curve)?;
    if curve_sq.is_zero() {
        return Err(Error::Unsolvable(
            "curve has square zero; adjunction does not determine K".into(),
        ));
    }
    let expansion = surface.expand_class(curve)?;
    let (chi_neg, _) = orb_euler_curve(orbifold, curve, genus)?;
    // K = kappa * G: kappa * (c * G^2) = chi_neg - curve^2.
    let c = &expansion[0];
    let g_sq = surface.designated_pairing(&[rat_int(1)], &[rat_int(1)]);
    let kappa = (chi_neg - curve_sq) / (c * g_sq);
    Ok(QDivisor {
        basis_labels: surface.h2_minus_p.labels.clone(),
        coords: vec![kappa],
    })
}

/// Verdict of an ampleness test. `NotAmple` names the violated ray (or the
/// failed positivity condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmpleVerdict {
    Ample,
    NotAmple { violated: String },
}

impl AmpleVerdict {
    pub fn is_ample(&self) -> bool {
        matches!(self, AmpleVerdict::Ample)
    }
}

/// Tests a class (in designated coordinates) for ampleness.
///
/// Smooth bases pair the class against the model's effective-cone rays and,
/// for rank >= 2, additionally require positive self-intersection. On a
/// contracted base the designated basis elements themselves are the recorded
/// effective rays; for the rank-one models of the construction families this
/// is positivity of the single coefficient.
pub fn ampleness(surface: &ContractedSurface, class: &QDivisor) -> Result<AmpleVerdict> {
    if class.coords.len() != surface.h2_minus_p.rank() {
        return Err(Error::InvalidArgument(
            "class coordinates do not match the designated basis".into(),
        ));
    }
    if surface.spec.chains.is_empty() {
        let rays = &surface.model.cone_generators;
        if rays.is_empty() {
            return Err(Error::UnsupportedModel(format!(
                "model {} carries no cone data",
                surface.model.name
            )));
        }
        let realized = surface.class_from_designated(&class.coords)?;
        for (label, ray) in rays {
            let pairing = surface.model.intersect(&realized, ray)?;
            if !pairing.is_positive() {
                return Ok(AmpleVerdict::NotAmple {
                    violated: format!("ray {label} (pairing {pairing})"),
                });
            }
        }
        if surface.model.rank() >= 2 {
            let square = surface.model.intersect(&realized, &realized)?;
            if !square.is_positive() {
                return Ok(AmpleVerdict::NotAmple {
                    violated: format!("self-intersection {square} not positive"),
                });
            }
        }
        return Ok(AmpleVerdict::Ample);
    }
    for (k, label) in surface.h2_minus_p.labels.iter().enumerate() {
        let mut ray = vec![rat_int(0); surface.h2_minus_p.rank()];
        ray[k] = rat_int(1);
        let pairing = surface.designated_pairing(&class.coords, &ray);
        if !pairing.is_positive() {
            return Ok(AmpleVerdict::NotAmple {
                violated: format!("generator {label} (pairing {pairing})"),
            });
        }
    }
    Ok(AmpleVerdict::Ample)
}

/// Sign of the Sasakian structure determined by the orbifold: negative iff
/// `K^orb` is ample, positive iff `-K^orb` is ample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SasakiSign {
    Negative,
    Positive,
    IndefiniteOrNull,
}

impl std::fmt::Display for SasakiSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SasakiSign::Negative => write!(f, "NEGATIVE"),
            SasakiSign::Positive => write!(f, "POSITIVE"),
            SasakiSign::IndefiniteOrNull => write!(f, "INDEFINITE_OR_NULL"),
        }
    }
}

pub fn sasaki_sign(orbifold: &OrbifoldSurface) -> Result<SasakiSign> {
    let k_orb = canonical_orb(orbifold)?;
    if ampleness(&orbifold.surface, &k_orb)?.is_ample() {
        return Ok(SasakiSign::Negative);
    }
    if ampleness(&orbifold.surface, &k_orb.neg())?.is_ample() {
        return Ok(SasakiSign::Positive);
    }
    Ok(SasakiSign::IndefiniteOrNull)
}
