//! Builders for the surface models used by the construction families:
//! Hirzebruch surfaces, blow-ups of the projective plane (including the
//! cubic-with-tangent-line configuration), and relatively minimal elliptic
//! surfaces with one reducible fiber.
//!
//! Each builder returns a fully populated [`ContractedSurface`]; smooth bases
//! use an empty contraction specification.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::surface::{
    Chain, ContractedSurface, ContractionSpec, DesignatedBasis, DivisorClass, H2Generator,
    NamedCurve, SurfaceModel,
};

fn named(surface: &str, label: &str, coords: &[i64], genus: Option<i64>) -> NamedCurve {
    NamedCurve {
        label: label.to_string(),
        class: DivisorClass::from_integers(surface, coords),
        genus,
    }
}

/// Hirzebruch surface `F_n`, `n >= 1`, with basis `(C, E0)` (fiber and zero
/// section), relations `Einf = E0 - nC`, `K = (n-2)C - 2E0`, and the
/// contraction of `Einf`. For `n = 1` the section at infinity is a
/// (-1)-curve and the blow-down produces a smooth point.
pub fn hirzebruch_model(n: i64) -> Result<ContractedSurface> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("Hirzebruch index n must be >= 1, got {n}")));
    }
    let name = format!("F_{n}");
    let gram = vec![vec![0, 1], vec![1, n]];
    let curves = vec![
        named(&name, "C", &[1, 0], Some(0)),
        named(&name, "E0", &[0, 1], Some(0)),
        named(&name, "Einf", &[-n, 1], Some(0)),
    ];
    let cone = vec![
        ("C".to_string(), DivisorClass::from_integers(&name, &[1, 0])),
        ("Einf".to_string(), DivisorClass::from_integers(&name, &[-n, 1])),
    ];
    let model = SurfaceModel::new(&name, vec!["C".into(), "E0".into()], gram, &[n - 2, -2], curves, cone, 2)?;
    let spec = ContractionSpec {
        chains: vec![Chain {
            point_label: "p".into(),
            members: vec!["Einf".into()],
        }],
    };
    let designated = DesignatedBasis {
        labels: vec!["Cbar".into()],
        classes: vec![DivisorClass::from_integers(&name, &[1, 0])],
    };
    let h2_x = vec![H2Generator {
        label: "E0".into(),
        class: DivisorClass::from_integers(&name, &[0, 1]),
        expansion: vec![BigInt::from(n)],
    }];
    ContractedSurface::new(model, spec, designated, h2_x, vec![])
}

/// Blow-up of the projective plane at 1, 2 or 3 general points, with the
/// standard basis `(L, E, ...)`, `K = -3L + sum E_i`, and the effective-cone
/// rays used for the ampleness inequalities. No contraction.
pub fn cp2_blowup_model(points: u8) -> Result<ContractedSurface> {
    let (name, labels): (&str, Vec<&str>) = match points {
        1 => ("CP2x1", vec!["L", "E"]),
        2 => ("CP2x2", vec!["L", "E", "E'"]),
        3 => ("CP2x3", vec!["L", "E", "E'", "E''"]),
        _ => {
            return Err(Error::InvalidInput(format!(
                "cp2_blowup_model supports 1, 2 or 3 points, got {points}"
            )))
        }
    };
    let rank = labels.len();
    let mut gram = vec![vec![0i64; rank]; rank];
    gram[0][0] = 1;
    for i in 1..rank {
        gram[i][i] = -1;
    }
    let mut canonical = vec![-3i64];
    canonical.extend(std::iter::repeat(1).take(rank - 1));

    let mut curves = Vec::new();
    let unit = |i: usize| {
        let mut v = vec![0i64; rank];
        v[i] = 1;
        v
    };
    for (i, label) in labels.iter().enumerate() {
        curves.push(named(name, label, &unit(i), Some(0)));
    }

    let cone: Vec<(String, DivisorClass)> = match points {
        1 => vec![
            ("L-E".into(), DivisorClass::from_integers(name, &[1, -1])),
            ("E".into(), DivisorClass::from_integers(name, &[0, 1])),
        ],
        2 => vec![
            ("E".into(), DivisorClass::from_integers(name, &[0, 1, 0])),
            ("E'".into(), DivisorClass::from_integers(name, &[0, 0, 1])),
            ("L-E-E'".into(), DivisorClass::from_integers(name, &[1, -1, -1])),
        ],
        _ => vec![
            ("E".into(), DivisorClass::from_integers(name, &[0, 1, 0, 0])),
            ("E'".into(), DivisorClass::from_integers(name, &[0, 0, 1, 0])),
            ("E''".into(), DivisorClass::from_integers(name, &[0, 0, 0, 1])),
            ("L-E-E'".into(), DivisorClass::from_integers(name, &[1, -1, -1, 0])),
            ("L-E-E''".into(), DivisorClass::from_integers(name, &[1, -1, 0, -1])),
            ("L-E'-E''".into(), DivisorClass::from_integers(name, &[1, 0, -1, -1])),
        ],
    };

    let model = SurfaceModel::new(
        name,
        labels.iter().map(|s| s.to_string()).collect(),
        gram,
        &canonical,
        curves,
        cone,
        rank as i64,
    )?;

    // Smooth base: the designated H^2(X - P) basis is a unimodular lattice
    // basis. For the one-point blow-up the paper's nef pair (L-E, L) is used
    // so that Kahler classes have positive coordinates.
    let (labels_d, classes_d): (Vec<String>, Vec<DivisorClass>) = match points {
        1 => (
            vec!["L-E".into(), "L".into()],
            vec![
                DivisorClass::from_integers(name, &[1, -1]),
                DivisorClass::from_integers(name, &[1, 0]),
            ],
        ),
        _ => (
            model.basis.clone(),
            (0..rank)
                .map(|i| {
                    let mut v = vec![0i64; rank];
                    v[i] = 1;
                    DivisorClass::from_integers(name, &v)
                })
                .collect(),
        ),
    };
    let h2_x: Vec<H2Generator> = classes_d
        .iter()
        .zip(&labels_d)
        .enumerate()
        .map(|(i, (class, label))| {
            let mut expansion = vec![BigInt::from(0); classes_d.len()];
            expansion[i] = BigInt::from(1);
            H2Generator {
                label: label.clone(),
                class: class.clone(),
                expansion,
            }
        })
        .collect();
    let designated = DesignatedBasis {
        labels: labels_d,
        classes: classes_d,
    };
    ContractedSurface::new(model, ContractionSpec::default(), designated, h2_x, vec![])
}

/// The triple blow-up of the plane resolving a cubic with a tangent line:
/// basis `(L, e1, e2, e3)` with named curves
/// `Ccheck = 3L - e1 - e2` (the cubic, genus 1), `Lcheck = L - e1 - e2 - e3`,
/// `A = e2 - e3`, `B = e1 - e2`, `E = e3`, and a generic line `Lgen = L`.
/// Contracts the chain `(A, B)` and the single curve `Lcheck`, producing
/// singular points of orders 3 and 2. In the contracted surface
/// `Ccheck = 7 Ebar`, `Lgen = 3 Ebar`, and `x = Ccheck - E = 6 Ebar`
/// generates `H^2(X, Z)`.
pub fn cubic_tangent_model() -> Result<ContractedSurface> {
    let name = "CP2x3-cubic-tangent";
    let gram = vec![
        vec![1, 0, 0, 0],
        vec![0, -1, 0, 0],
        vec![0, 0, -1, 0],
        vec![0, 0, 0, -1],
    ];
    let curves = vec![
        named(name, "Ccheck", &[3, -1, -1, 0], Some(1)),
        named(name, "Lcheck", &[1, -1, -1, -1], Some(0)),
        named(name, "A", &[0, 0, 1, -1], Some(0)),
        named(name, "B", &[0, 1, -1, 0], Some(0)),
        named(name, "E", &[0, 0, 0, 1], Some(0)),
        named(name, "Lgen", &[1, 0, 0, 0], Some(0)),
    ];
    let model = SurfaceModel::new(
        name,
        vec!["L".into(), "e1".into(), "e2".into(), "e3".into()],
        gram,
        &[-3, 1, 1, 1],
        curves,
        vec![],
        4,
    )?;
    let spec = ContractionSpec {
        chains: vec![
            Chain {
                point_label: "q1".into(),
                members: vec!["A".into(), "B".into()],
            },
            Chain {
                point_label: "q2".into(),
                members: vec!["Lcheck".into()],
            },
        ],
    };
    let designated = DesignatedBasis {
        labels: vec!["Ebar".into()],
        classes: vec![DivisorClass::from_integers(name, &[0, 0, 0, 1])],
    };
    let h2_x = vec![H2Generator {
        label: "x".into(),
        class: DivisorClass::from_integers(name, &[3, -1, -1, -1]),
        expansion: vec![BigInt::from(6)],
    }];
    let declared = vec![
        ("Ccheck".to_string(), vec![BigInt::from(7)]),
        ("Lgen".to_string(), vec![BigInt::from(3)]),
    ];
    ContractedSurface::new(model, spec, designated, h2_x, declared)
}

/// Neron-Severi lattice of a relatively minimal elliptic surface over the
/// line with section `O`, Euler characteristic `12N`, and one fiber of type
/// `I_n`: basis `(O, Th1, ..., Th_{n-1}, F)` with `O^2 = -N`, `Th_i^2 = -2`,
/// cyclic component adjacency, and `F.O = 1`. Contracts the chain
/// `(O, Th0, ..., Th_{n-2})` where `Th0 = F - sum Th_i`, giving one singular
/// point of order `(N-1)n + 1`. The surface has `b2 = 12N - 2`; existence of
/// the surface with Picard number `n + 1` is an input assumption recorded in
/// certificates.
pub fn elliptic_model(big_n: i64, n: i64) -> Result<ContractedSurface> {
    if big_n < 2 {
        return Err(Error::InvalidInput(format!(
            "elliptic model needs N >= 2, got {big_n}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidInput(format!(
            "elliptic model needs n >= 1, got {n}"
        )));
    }
    let name = format!("elliptic-N{big_n}-I{n}");
    let rank = (n + 1) as usize;
    let mut basis: Vec<String> = vec!["O".into()];
    for i in 1..n {
        basis.push(format!("Th{i}"));
    }
    basis.push("F".into());

    let mut gram = vec![vec![0i64; rank]; rank];
    gram[0][0] = -big_n;
    gram[0][rank - 1] = 1;
    gram[rank - 1][0] = 1;
    for i in 1..rank - 1 {
        gram[i][i] = -2;
        if i + 1 < rank - 1 {
            gram[i][i + 1] = 1;
            gram[i + 1][i] = 1;
        }
    }

    let mut curves = vec![named(&name, "O", &unit_vec(rank, 0), Some(0))];
    for i in 1..(n as usize) {
        curves.push(named(&name, &format!("Th{i}"), &unit_vec(rank, i), Some(0)));
    }
    curves.push(named(&name, "F", &unit_vec(rank, rank - 1), Some(1)));
    // Th0 = F - sum Th_i closes the cycle; only registered for n >= 2 (the
    // n = 1 fiber is a nodal cubic, not a smooth rational curve).
    if n >= 2 {
        let mut th0 = vec![0i64; rank];
        th0[rank - 1] = 1;
        for coord in th0.iter_mut().take(rank - 1).skip(1) {
            *coord = -1;
        }
        curves.push(named(&name, "Th0", &th0, Some(0)));
    }

    let mut canonical = vec![0i64; rank];
    canonical[rank - 1] = big_n - 2;

    let model = SurfaceModel::new(
        &name,
        basis,
        gram,
        &canonical,
        curves,
        vec![],
        12 * big_n - 2,
    )?;

    let mut members = vec!["O".to_string()];
    if n >= 2 {
        members.push("Th0".to_string());
    }
    for i in 1..=(n - 2) {
        members.push(format!("Th{i}"));
    }
    let spec = ContractionSpec {
        chains: vec![Chain {
            point_label: "p".into(),
            members,
        }],
    };
    let designated = DesignatedBasis {
        labels: vec!["Fbar".into()],
        classes: vec![DivisorClass::from_integers(&name, &unit_vec(rank, rank - 1))],
    };
    ContractedSurface::new(model, spec, designated, vec![], vec![])
}

fn unit_vec(rank: usize, index: usize) -> Vec<i64> {
    let mut v = vec![0i64; rank];
    v[index] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    #[test]
    fn hirzebruch_one_contracts_to_smooth_point() {
        let surface = hirzebruch_model(1).unwrap();
        let p = surface.chain_singularity(0).unwrap();
        assert_eq!(p.d, 1);
        assert!(!p.is_singular());
        let c = surface.model.class_of("C").unwrap();
        assert_eq!(surface.push_intersect(&c, &c).unwrap(), rat_int(1));
    }

    #[test]
    fn elliptic_chain_orders() {
        for big_n in 2..=6 {
            for n in 1..=12 {
                let surface = elliptic_model(big_n, n).unwrap();
                let p = surface.chain_singularity(0).unwrap();
                assert_eq!(p.d, (big_n - 1) * n + 1);
            }
        }
    }

    #[test]
    fn elliptic_cycle_adjacency() {
        // Th0 meets O once, Th1 once (n >= 3), and Th_{n-1} once.
        let surface = elliptic_model(3, 4).unwrap();
        let model = &surface.model;
        let th0 = model.class_of("Th0").unwrap();
        let o = model.class_of("O").unwrap();
        let th1 = model.class_of("Th1").unwrap();
        let th3 = model.class_of("Th3").unwrap();
        assert_eq!(model.intersect(&th0, &o).unwrap(), rat_int(1));
        assert_eq!(model.intersect(&th0, &th1).unwrap(), rat_int(1));
        assert_eq!(model.intersect(&th0, &th3).unwrap(), rat_int(1));
        assert_eq!(model.intersect(&th0, &th0).unwrap(), rat_int(-2));
        // I_2 fibers: the two components meet twice.
        let surface = elliptic_model(3, 2).unwrap();
        let th0 = surface.model.class_of("Th0").unwrap();
        let th1 = surface.model.class_of("Th1").unwrap();
        assert_eq!(surface.model.intersect(&th0, &th1).unwrap(), rat_int(2));
    }

    #[test]
    fn blowup_cone_data_present() {
        for points in 1..=3u8 {
            let surface = cp2_blowup_model(points).unwrap();
            assert!(!surface.model.cone_generators.is_empty());
            assert!(surface.is_smooth());
        }
        assert!(cp2_blowup_model(4).is_err());
    }
}
