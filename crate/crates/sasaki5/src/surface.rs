//! Divisor lattices of smooth complex surfaces, contraction of curve chains
//! into cyclic quotient singularities, and exact rational intersection theory
//! on the contracted surfaces via pull-back.
//!
//! Intersections on a contracted surface are always computed through the
//! pull-back linear system (the chain Gram matrices are negative definite, so
//! the correction coefficients are uniquely determined). The closed formula
//! `Dbar^2 = D^2 + r/m` for a curve meeting the head of a single chain is a
//! test oracle, not the implementation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{hj_reverse_residue, hj_value, rat_int, Rational};
use crate::error::{Error, Result};

/// Exact coordinate vector over the basis of a named surface lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    /// Name of the owning [`SurfaceModel`]; operations reject classes from a
    /// different surface.
    pub surface: String,
    pub coords: Vec<Rational>,
}

impl DivisorClass {
    pub fn from_integers(surface: &str, coords: &[i64]) -> Self {
        DivisorClass {
            surface: surface.to_string(),
            coords: coords.iter().map(|&c| rat_int(c)).collect(),
        }
    }

    pub fn zero(surface: &str, rank: usize) -> Self {
        DivisorClass {
            surface: surface.to_string(),
            coords: vec![rat_int(0); rank],
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        debug_assert_eq!(self.surface, other.surface);
        DivisorClass {
            surface: self.surface.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> DivisorClass {
        DivisorClass {
            surface: self.surface.clone(),
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }
}

/// A registered curve class, optionally carrying a genus. Genus entries are
/// re-verified against the adjunction formula at model construction.
#[derive(Debug, Clone)]
pub struct NamedCurve {
    pub label: String,
    pub class: DivisorClass,
    pub genus: Option<i64>,
}

/// Intersection lattice of a smooth surface, together with the canonical
/// class, a registry of named curves, and the effective-cone rays used for
/// ampleness tests.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    pub name: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub canonical: DivisorClass,
    pub named_curves: Vec<NamedCurve>,
    /// Effective/Mori cone rays; ampleness is positivity against these.
    pub cone_generators: Vec<(String, DivisorClass)>,
    /// Metadata: the surface is simply connected (true for every model built
    /// here; recorded as an assumption in certificates, never computed).
    pub simply_connected: bool,
    /// Second Betti number of the surface. Equals the lattice rank for the
    /// rational models; the elliptic models carry transcendental classes and
    /// declare it separately.
    pub b2: i64,
}

impl SurfaceModel {
    pub fn new(
        name: &str,
        basis: Vec<String>,
        gram: Vec<Vec<i64>>,
        canonical_coords: &[i64],
        named_curves: Vec<NamedCurve>,
        cone_generators: Vec<(String, DivisorClass)>,
        b2: i64,
    ) -> Result<Self> {
        let rank = basis.len();
        if gram.len() != rank || gram.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidArgument(format!(
                "intersection matrix of {name} is not {rank}x{rank}"
            )));
        }
        for i in 0..rank {
            for j in 0..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "intersection matrix of {name} is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if canonical_coords.len() != rank {
            return Err(Error::InvalidArgument(format!(
                "canonical class of {name} has wrong rank"
            )));
        }
        let model = SurfaceModel {
            name: name.to_string(),
            basis,
            gram,
            canonical: DivisorClass::from_integers(name, canonical_coords),
            named_curves,
            cone_generators,
            simply_connected: true,
            b2,
        };
        for curve in &model.named_curves {
            if let Some(genus) = curve.genus {
                let computed = model.genus_smooth(&curve.class)?;
                if computed != genus {
                    return Err(Error::InvalidArgument(format!(
                        "curve {} declares genus {genus} but adjunction gives {computed}",
                        curve.label
                    )));
                }
            }
        }
        Ok(model)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn check_owned(&self, class: &DivisorClass) -> Result<()> {
        if class.surface != self.name {
            return Err(Error::SurfaceMismatch(format!(
                "class belongs to {}, not {}",
                class.surface, self.name
            )));
        }
        if class.coords.len() != self.rank() {
            return Err(Error::SurfaceMismatch(format!(
                "class has {} coordinates, model {} has rank {}",
                class.coords.len(),
                self.name,
                self.rank()
            )));
        }
        Ok(())
    }

    /// Exact bilinear form evaluation `D1^T Q D2`.
    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
        self.check_owned(d1)?;
        self.check_owned(d2)?;
        let mut total = rat_int(0);
        for (i, a) in d1.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in d2.coords.iter().enumerate() {
                let q = self.gram[i][j];
                if q != 0 && !b.is_zero() {
                    total += a * b * rat_int(q);
                }
            }
        }
        Ok(total)
    }

    /// Genus from adjunction: `2g - 2 = D^2 + K.D`. Errors when the result
    /// is not a non-negative integer.
    pub fn genus_smooth(&self, class: &DivisorClass) -> Result<i64> {
        let total = self.intersect(class, class)? + self.intersect(&self.canonical, class)?;
        if !total.is_integer() {
            return Err(Error::NotASmoothCurveClass(format!(
                "D^2 + K.D = {total} is not an integer"
            )));
        }
        let value = total.to_integer();
        if (&value % BigInt::from(2)) != BigInt::zero() {
            return Err(Error::NotASmoothCurveClass(format!(
                "D^2 + K.D = {value} is odd"
            )));
        }
        let genus = (value + BigInt::from(2)) / BigInt::from(2);
        if genus.is_negative() {
            return Err(Error::NotASmoothCurveClass(format!(
                "adjunction genus {genus} is negative"
            )));
        }
        i64::try_from(genus).map_err(|_| Error::NotASmoothCurveClass("genus overflow".into()))
    }

    pub fn curve(&self, label: &str) -> Result<&NamedCurve> {
        self.named_curves
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("no curve named {label} on {}", self.name))
            })
    }

    pub fn class_of(&self, label: &str) -> Result<DivisorClass> {
        Ok(self.curve(label)?.class.clone())
    }
}

/// One chain to contract: an ordered list of registered curve labels forming
/// a linear chain (consecutive members meet once, all others disjoint).
#[derive(Debug, Clone)]
pub struct Chain {
    /// Label of the singular point created by the contraction.
    pub point_label: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ContractionSpec {
    pub chains: Vec<Chain>,
}

/// A cyclic quotient singularity obtained by contracting one chain. The type
/// `(d, r)` is the HJ value of the chain's negated self-intersections; `r'`
/// is the residue of the reversed chain (the convention for curves meeting
/// the tail). A chain consisting of a single (-1)-curve contracts to a
/// smooth point, recorded as `d = 1`.
#[derive(Debug, Clone)]
pub struct SingularPoint {
    pub label: String,
    pub chain_index: usize,
    pub d: i64,
    pub r: i64,
    pub r_reversed: i64,
}

impl SingularPoint {
    /// True for honest quotient singularities; `d = 1` chains blow down to
    /// smooth points and drop out of the singular set.
    pub fn is_singular(&self) -> bool {
        self.d > 1
    }
}

/// Designated classes generating `H^2(X - P, Z)` of the contracted surface
/// (equivalently `H_2(X, Z)`), declared per model as an audited fixture.
#[derive(Debug, Clone)]
pub struct DesignatedBasis {
    pub labels: Vec<String>,
    pub classes: Vec<DivisorClass>,
}

impl DesignatedBasis {
    pub fn rank(&self) -> usize {
        self.classes.len()
    }
}

/// A declared generator of `H^2(X, Z)` together with its integral expansion
/// in the designated `H^2(X - P)` basis. Such classes pair to zero with every
/// contracted curve (they push off the singular set); both facts are checked
/// at construction.
#[derive(Debug, Clone)]
pub struct H2Generator {
    pub label: String,
    pub class: DivisorClass,
    pub expansion: Vec<BigInt>,
}

/// How a curve meets one contracted chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainRelation {
    /// Disjoint from every member.
    Misses,
    /// Meets the first member once, nothing else. A single-curve chain
    /// reports `MeetsHead`.
    MeetsHead,
    /// Meets the last member once, nothing else.
    MeetsTail,
    /// Any other pattern: the pushed-down curve is not orbismooth there.
    NotOrbismooth,
}

/// Incidence report of a curve against one chain.
#[derive(Debug, Clone)]
pub struct ChainIncidence {
    pub point_label: String,
    pub chain_index: usize,
    /// `(member label, intersection number)` for every chain member.
    pub pairings: Vec<(String, BigInt)>,
    pub relation: ChainRelation,
    pub transversal_count: BigInt,
}

impl ChainIncidence {
    pub fn meets(&self) -> bool {
        self.relation != ChainRelation::Misses
    }
}

/// A smooth-surface lattice together with a contraction specification and the
/// designated cohomology bases of the contracted surface. An empty
/// specification models a smooth orbifold base (no singular points); all
/// operations then reduce to plain lattice arithmetic.
#[derive(Debug, Clone)]
pub struct ContractedSurface {
    pub model: SurfaceModel,
    pub spec: ContractionSpec,
    pub singular_points: Vec<SingularPoint>,
    pub h2_minus_p: DesignatedBasis,
    pub h2_x: Vec<H2Generator>,
    /// Audited integral expansions of named curves in the designated basis.
    pub declared_expansions: Vec<(String, Vec<BigInt>)>,
    /// Cached pairing matrix of the designated basis under push-forward.
    pairing: Vec<Vec<Rational>>,
}

impl ContractedSurface {
    pub fn new(
        model: SurfaceModel,
        spec: ContractionSpec,
        h2_minus_p: DesignatedBasis,
        h2_x: Vec<H2Generator>,
        declared_expansions: Vec<(String, Vec<BigInt>)>,
    ) -> Result<Self> {
        let mut singular_points = Vec::new();
        let mut all_members: Vec<(usize, DivisorClass)> = Vec::new();
        for (idx, chain) in spec.chains.iter().enumerate() {
            if chain.members.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "chain {} is empty",
                    chain.point_label
                )));
            }
            let mut classes = Vec::new();
            for label in &chain.members {
                let class = model.class_of(label)?;
                if !class.is_integral() {
                    return Err(Error::InvalidArgument(format!(
                        "chain member {label} has non-integral coordinates"
                    )));
                }
                classes.push(class);
            }
            let mut selfs = Vec::new();
            for (i, a) in classes.iter().enumerate() {
                let self_int = model.intersect(a, a)?;
                let s = self_int
                    .is_integer()
                    .then(|| i64::try_from(self_int.to_integer()).ok())
                    .flatten()
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "self-intersection of {} is not a small integer",
                            chain.members[i]
                        ))
                    })?;
                selfs.push(s);
                for (j, b) in classes.iter().enumerate().skip(i + 1) {
                    let pair = model.intersect(a, b)?;
                    let expected = if j == i + 1 { rat_int(1) } else { rat_int(0) };
                    if pair != expected {
                        return Err(Error::InvalidArgument(format!(
                            "chain {}: members {} and {} intersect in {pair}, expected {expected}",
                            chain.point_label, chain.members[i], chain.members[j]
                        )));
                    }
                }
            }
            let exceptional_blowdown = selfs == [-1];
            if !exceptional_blowdown {
                if let Some(pos) = selfs.iter().position(|&s| s > -2) {
                    return Err(Error::InvalidArgument(format!(
                        "chain {}: member {} has self-intersection {}, need <= -2",
                        chain.point_label, chain.members[pos], selfs[pos]
                    )));
                }
            }
            check_negative_definite_chain(&chain.point_label, &selfs)?;
            let (d, r, r_reversed) = if exceptional_blowdown {
                (1, 0, 0)
            } else {
                let entries: Vec<i64> = selfs.iter().map(|&s| -s).collect();
                let (d, r) = hj_value(&entries)?;
                (d, r, hj_reverse_residue(d, r)?)
            };
            singular_points.push(SingularPoint {
                label: chain.point_label.clone(),
                chain_index: idx,
                d,
                r,
                r_reversed,
            });
            for class in classes {
                all_members.push((idx, class));
            }
        }
        // Distinct chains must be mutually disjoint.
        for (i, (ci, a)) in all_members.iter().enumerate() {
            for (cj, b) in all_members.iter().skip(i + 1).map(|t| (&t.0, &t.1)) {
                if ci != cj && model.intersect(a, b)? != rat_int(0) {
                    return Err(Error::InvalidArgument(format!(
                        "chains {} and {} are not disjoint",
                        spec.chains[*ci].point_label, spec.chains[*cj].point_label
                    )));
                }
            }
        }

        if h2_minus_p.classes.is_empty() {
            return Err(Error::InvalidArgument(
                "designated H^2(X-P) basis must not be empty".into(),
            ));
        }
        for class in &h2_minus_p.classes {
            model.check_owned(class)?;
        }

        let mut surface = ContractedSurface {
            model,
            spec,
            singular_points,
            h2_minus_p,
            h2_x,
            declared_expansions,
            pairing: Vec::new(),
        };

        // Pairing matrix of the designated basis, and nondegeneracy.
        let rank = surface.h2_minus_p.rank();
        let mut pairing = vec![vec![rat_int(0); rank]; rank];
        for i in 0..rank {
            let pulled = surface.pullback(&surface.h2_minus_p.classes[i])?;
            for j in 0..rank {
                pairing[i][j] = surface.model.intersect(&pulled, &surface.h2_minus_p.classes[j])?;
            }
        }
        surface.pairing = pairing;
        if !is_invertible(&surface.pairing) {
            return Err(Error::InvalidArgument(
                "designated basis pairing matrix is singular".into(),
            ));
        }

        // H^2(X) generators push off the singular set and expand integrally.
        for generator in &surface.h2_x {
            if !generator.class.is_integral() {
                return Err(Error::InvalidArgument(format!(
                    "H^2(X) generator {} is not integral",
                    generator.label
                )));
            }
            for (idx, member) in all_members.iter() {
                let pair = surface.model.intersect(&generator.class, member)?;
                if pair != rat_int(0) {
                    return Err(Error::InvalidArgument(format!(
                        "H^2(X) generator {} pairs {pair} with a member of chain {}; must be 0",
                        generator.label, surface.spec.chains[*idx].point_label
                    )));
                }
            }
            let expansion: Vec<Rational> =
                generator.expansion.iter().map(|e| Rational::from_integer(e.clone())).collect();
            surface.audit_expansion(&generator.label, &generator.class, &expansion)?;
        }
        for (label, expansion) in surface.declared_expansions.clone() {
            let class = surface.model.class_of(&label)?;
            let expansion: Vec<Rational> =
                expansion.iter().map(|e| Rational::from_integer(e.clone())).collect();
            surface.audit_expansion(&label, &class, &expansion)?;
        }
        Ok(surface)
    }

    fn audit_expansion(
        &self,
        label: &str,
        class: &DivisorClass,
        expansion: &[Rational],
    ) -> Result<()> {
        if expansion.len() != self.h2_minus_p.rank() {
            return Err(Error::InvalidArgument(format!(
                "expansion of {label} has wrong rank"
            )));
        }
        for (j, basis_class) in self.h2_minus_p.classes.iter().enumerate() {
            let actual = self.push_intersect(class, basis_class)?;
            let mut predicted = rat_int(0);
            for (k, coeff) in expansion.iter().enumerate() {
                predicted += coeff * &self.pairing[k][j];
            }
            if actual != predicted {
                return Err(Error::InvalidArgument(format!(
                    "declared expansion of {label} fails audit against basis element {}: {actual} != {predicted}",
                    self.h2_minus_p.labels[j]
                )));
            }
        }
        Ok(())
    }

    /// Second Betti number of the contracted surface.
    pub fn b2(&self) -> i64 {
        let contracted: usize = self.spec.chains.iter().map(|c| c.members.len()).sum();
        self.model.b2 - contracted as i64
    }

    pub fn is_smooth(&self) -> bool {
        self.singular_points.iter().all(|p| !p.is_singular())
    }

    /// Singular points with `d > 1` (the set `P`).
    pub fn singular_set(&self) -> impl Iterator<Item = &SingularPoint> {
        self.singular_points.iter().filter(|p| p.is_singular())
    }

    /// The numerical pull-back `D + sum x_j E_j` with rational `x_j` solving
    /// `E_j . (D + sum x_k E_k) = 0` for every chain member. Each chain
    /// contributes an independent tridiagonal system.
    pub fn pullback(&self, class: &DivisorClass) -> Result<DivisorClass> {
        self.model.check_owned(class)?;
        let mut result = class.clone();
        for chain in &self.spec.chains {
            let members: Vec<DivisorClass> = chain
                .members
                .iter()
                .map(|l| self.model.class_of(l))
                .collect::<Result<_>>()?;
            let rhs: Vec<Rational> = members
                .iter()
                .map(|m| self.model.intersect(class, m).map(|v| -v))
                .collect::<Result<_>>()?;
            if rhs.iter().all(|v| v.is_zero()) {
                continue;
            }
            let diag: Vec<Rational> = members
                .iter()
                .map(|m| self.model.intersect(m, m))
                .collect::<Result<_>>()?;
            let coeffs = solve_tridiagonal_unit(&diag, &rhs)?;
            for (x, member) in coeffs.iter().zip(&members) {
                if !x.is_zero() {
                    result = result.add(&member.scaled(x));
                }
            }
        }
        Ok(result)
    }

    /// Intersection number of the pushed-down classes on the contracted
    /// surface: `pullback(D) . pullback(D')`, computed as `pullback(D) . D'`
    /// by the projection formula.
    pub fn push_intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Rational> {
        let pulled = self.pullback(d1)?;
        self.model.intersect(&pulled, d2)
    }

    /// `K . pullback(D)` on the resolved model. Equals the pairing of the
    /// contracted surface's canonical class with the pushed-down class
    /// (exceptional discrepancies pair to zero with pull-backs).
    pub fn canonical_intersect(&self, class: &DivisorClass) -> Result<Rational> {
        let pulled = self.pullback(class)?;
        self.model.intersect(&self.model.canonical, &pulled)
    }

    pub fn chain_singularity(&self, chain_index: usize) -> Result<&SingularPoint> {
        self.singular_points
            .get(chain_index)
            .ok_or_else(|| Error::InvalidArgument(format!("no chain with index {chain_index}")))
    }

    /// Reports, for every chain, the intersection numbers of `class` with
    /// each member and whether the pushed-down curve is orbismooth at the
    /// corresponding point (meets exactly one end member once, nothing else).
    pub fn incidence(&self, class: &DivisorClass) -> Result<Vec<ChainIncidence>> {
        self.model.check_owned(class)?;
        let mut reports = Vec::new();
        for (idx, chain) in self.spec.chains.iter().enumerate() {
            let mut pairings = Vec::new();
            let mut total = BigInt::zero();
            for label in &chain.members {
                let member = self.model.class_of(label)?;
                let value = self.model.intersect(class, &member)?;
                if !value.is_integer() {
                    return Err(Error::InvalidArgument(format!(
                        "incidence of a non-integral class with chain member {label}"
                    )));
                }
                let value = value.to_integer();
                total += &value;
                pairings.push((label.clone(), value));
            }
            let relation = classify_incidence(&pairings);
            reports.push(ChainIncidence {
                point_label: chain.point_label.clone(),
                chain_index: idx,
                pairings,
                relation,
                transversal_count: total,
            });
        }
        Ok(reports)
    }

    /// Exact expansion of a pushed-down class in the designated basis,
    /// obtained by solving against the (nondegenerate) pairing matrix.
    pub fn expand_class(&self, class: &DivisorClass) -> Result<Vec<Rational>> {
        let rank = self.h2_minus_p.rank();
        let mut rhs = Vec::with_capacity(rank);
        for basis_class in &self.h2_minus_p.classes {
            rhs.push(self.push_intersect(class, basis_class)?);
        }
        // pairing is symmetric; solve pairing * x = rhs.
        solve_dense(&self.pairing, &rhs)
    }

    /// Expansion with integrality enforced; errors with `ModelIncomplete`
    /// when the class is not an integer combination of the designated basis.
    pub fn expand_class_integer(&self, class: &DivisorClass) -> Result<Vec<BigInt>> {
        let expansion = self.expand_class(class)?;
        expansion
            .iter()
            .map(|c| {
                c.is_integer().then(|| c.to_integer()).ok_or_else(|| {
                    Error::ModelIncomplete(format!(
                        "class does not expand integrally in the designated basis: coefficient {c}"
                    ))
                })
            })
            .collect()
    }

    /// Pairing of two coordinate vectors in the designated basis.
    pub fn designated_pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut total = rat_int(0);
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if !ai.is_zero() && !bj.is_zero() {
                    total += ai * bj * &self.pairing[i][j];
                }
            }
        }
        total
    }

    /// Realize designated-basis coordinates as a rational class on the
    /// resolved model.
    pub fn class_from_designated(&self, coords: &[Rational]) -> Result<DivisorClass> {
        if coords.len() != self.h2_minus_p.rank() {
            return Err(Error::InvalidArgument(
                "designated coordinate vector has wrong rank".into(),
            ));
        }
        let mut class = DivisorClass::zero(&self.model.name, self.model.rank());
        for (coeff, basis_class) in coords.iter().zip(&self.h2_minus_p.classes) {
            class = class.add(&basis_class.scaled(coeff));
        }
        Ok(class)
    }
}

fn classify_incidence(pairings: &[(String, BigInt)]) -> ChainRelation {
    let nonzero: Vec<usize> = pairings
        .iter()
        .enumerate()
        .filter(|(_, (_, v))| !v.is_zero())
        .map(|(i, _)| i)
        .collect();
    if nonzero.is_empty() {
        return ChainRelation::Misses;
    }
    if nonzero.len() == 1 {
        let i = nonzero[0];
        if pairings[i].1 == BigInt::one() {
            if i == 0 {
                return ChainRelation::MeetsHead;
            }
            if i == pairings.len() - 1 {
                return ChainRelation::MeetsTail;
            }
        }
    }
    ChainRelation::NotOrbismooth
}

/// Negative definiteness of the chain Gram matrix (diagonal `selfs`, unit
/// off-diagonal), via the alternating-sign leading principal minors
/// `p_k = s_k p_{k-1} - p_{k-2}`.
fn check_negative_definite_chain(label: &str, selfs: &[i64]) -> Result<()> {
    let mut p_prev = BigInt::one();
    let mut p = BigInt::from(selfs[0]);
    let mut sign = -1;
    if p.sign() != num_bigint::Sign::Minus {
        return Err(Error::InvalidArgument(format!(
            "chain {label} Gram matrix is not negative definite"
        )));
    }
    for &s in &selfs[1..] {
        let next = BigInt::from(s) * &p - &p_prev;
        p_prev = std::mem::replace(&mut p, next);
        sign = -sign;
        let ok = match sign {
            1 => p.is_positive(),
            _ => p.is_negative(),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "chain {label} Gram matrix is not negative definite"
            )));
        }
    }
    Ok(())
}

/// Solve a tridiagonal system with diagonal `diag`, unit off-diagonals, and
/// right-hand side `rhs` (Thomas elimination with exact rationals). The
/// pivots are nonzero for every negative-definite chain.
fn solve_tridiagonal_unit(diag: &[Rational], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut b = rhs.to_vec();
    for i in 1..n {
        if d[i - 1].is_zero() {
            return Err(Error::InvalidArgument("singular chain Gram matrix".into()));
        }
        let factor = rat_int(1) / &d[i - 1];
        let adj_d = &d[i] - &factor;
        d[i] = adj_d;
        let adj_b = &b[i] - &(&factor * &b[i - 1]);
        b[i] = adj_b;
    }
    if d[n - 1].is_zero() {
        return Err(Error::InvalidArgument("singular chain Gram matrix".into()));
    }
    let mut x = vec![rat_int(0); n];
    x[n - 1] = &b[n - 1] / &d[n - 1];
    for i in (0..n - 1).rev() {
        let num = &b[i] - &x[i + 1];
        x[i] = num / &d[i];
    }
    Ok(x)
}

/// Dense exact Gaussian elimination; only used for the small designated
/// bases (rank <= 4 in every model built here).
fn solve_dense(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidArgument("singular pairing matrix".into()))?;
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let adj = &a[r][c] - &(&factor * &a[col][c]);
                a[r][c] = adj;
            }
            let adj = &b[r] - &(&factor * &b[col]);
            b[r] = adj;
        }
    }
    let mut x = vec![rat_int(0); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for c in row + 1..n {
            acc -= &a[row][c] * &x[c];
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

fn is_invertible(matrix: &[Vec<Rational>]) -> bool {
    let n = matrix.len();
    let rhs = vec![rat_int(0); n];
    // Elimination succeeds with nonzero pivots iff the matrix is invertible;
    // reuse the solver against a zero RHS and inspect for errors.
    let mut a = matrix.to_vec();
    let mut _b = rhs;
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return false;
        };
        a.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let adj = &a[r][c] - &(&factor * &a[col][c]);
                a[r][c] = adj;
            }
        }
    }
    true
}
