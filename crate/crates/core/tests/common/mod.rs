//! Shared constructions for the integration tests: small group algebras
//! with explicit representations, and the worked GMA instances.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use tracealg::algebra::{compose, FlatAlgebra, Provenance};
use tracealg::coeff::artinian::{AElem, Artinian};
use tracealg::coeff::{ArtinianCoeff, Coeff, FieldCoeff, FiniteModule};
use tracealg::expr::parse_mpoly;
use tracealg::field::{Field, Rationals};
use tracealg::gma::{build_gma, GmaAlgebra, GmaData, ModuleSlot};
use tracealg::linalg::{mat_mul, Mat};
use tracealg::pseudochar::{group_pseudocharacter, Pseudocharacter};

pub type QPsc = Pseudocharacter<FieldCoeff<Rationals>>;

pub fn q(n: i64) -> BigRational {
    Rationals.from_i64(n)
}

/// S_3 on 3 points: generators (1 2 3) and (1 2), 0-based.
pub fn s3_algebra() -> Arc<FlatAlgebra<Rationals>> {
    Arc::new(
        FlatAlgebra::group_algebra(Rationals, &[vec![1, 2, 0], vec![1, 0, 2]], 3).unwrap(),
    )
}

/// D_4 on 4 points: the rotation (1 2 3 4) and the reflection (1 3).
pub fn d4_algebra() -> Arc<FlatAlgebra<Rationals>> {
    Arc::new(
        FlatAlgebra::group_algebra(Rationals, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]], 4).unwrap(),
    )
}

pub fn group_elements(alg: &FlatAlgebra<Rationals>) -> Vec<Vec<usize>> {
    match &alg.provenance {
        Provenance::GroupAlgebra { elements } => elements.clone(),
        _ => panic!("not a group algebra"),
    }
}

/// A matrix representation given on the basis elements of a group algebra,
/// checked to be a homomorphism.
pub fn check_representation(
    alg: &FlatAlgebra<Rationals>,
    rho: &BTreeMap<Vec<usize>, Mat<BigRational>>,
) {
    let f = Rationals;
    let elements = group_elements(alg);
    for a in &elements {
        for b in &elements {
            let ab = compose(a, b);
            let lhs = mat_mul(&f, &rho[a], &rho[b]);
            assert_eq!(lhs, rho[&ab], "not a homomorphism at {a:?} * {b:?}");
        }
    }
}

/// The standard 2-dimensional representation of S_3 on the sum-zero plane,
/// in the basis (e1 - e2, e2 - e3).
pub fn s3_standard_rep() -> BTreeMap<Vec<usize>, Mat<BigRational>> {
    let f = Rationals;
    let alg = s3_algebra();
    let elements = group_elements(&alg);
    let mut out = BTreeMap::new();
    for g in elements {
        // action on coordinates: g sends e_i to e_{g(i)}; express on the
        // basis v1 = e1 - e2, v2 = e2 - e3
        let perm = &g;
        let image_of = |i: usize| -> [i64; 3] {
            let mut v = [0i64; 3];
            v[perm[i]] = 1;
            v
        };
        let sub = |a: [i64; 3], b: [i64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        let v1 = sub(image_of(0), image_of(1));
        let v2 = sub(image_of(1), image_of(2));
        // coordinates of w = (w0,w1,w2) with sum 0 on (v1, v2): w = a v1 + b v2
        // => a = w0, b = -w2
        let coords = |w: [i64; 3]| (w[0], -w[2]);
        let (a1, b1) = coords(v1);
        let (a2, b2) = coords(v2);
        let m = Mat::from_rows(vec![
            vec![f.from_i64(a1), f.from_i64(a2)],
            vec![f.from_i64(b1), f.from_i64(b2)],
        ]);
        out.insert(g, m);
    }
    let rho = out.clone();
    check_representation(&alg, &rho);
    out
}

/// The 2-dimensional irreducible of D_4: rotation acts by a quarter turn,
/// the reflection (1 3) by a diagonal flip.
pub fn d4_two_dim_rep() -> BTreeMap<Vec<usize>, Mat<BigRational>> {
    let f = Rationals;
    let alg = d4_algebra();
    let elements = group_elements(&alg);
    // generators in terms of images: r = [1,2,3,0], s = [2,1,0,3]
    let r_mat = Mat::from_rows(vec![
        vec![f.from_i64(0), f.from_i64(-1)],
        vec![f.from_i64(1), f.from_i64(0)],
    ]);
    let s_mat = Mat::from_rows(vec![
        vec![f.from_i64(-1), f.from_i64(0)],
        vec![f.from_i64(0), f.from_i64(1)],
    ]);
    // build all images by word search
    let mut out: BTreeMap<Vec<usize>, Mat<BigRational>> = BTreeMap::new();
    let id: Vec<usize> = (0..4).collect();
    out.insert(id, tracealg::linalg::identity(&f, 2));
    let gens = [(vec![1usize, 2, 3, 0], r_mat), (vec![2usize, 1, 0, 3], s_mat)];
    loop {
        let mut added = false;
        let snapshot: Vec<(Vec<usize>, Mat<BigRational>)> =
            out.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (perm, mat) in &snapshot {
            for (gperm, gmat) in &gens {
                let comp = compose(perm, gperm);
                if !out.contains_key(&comp) {
                    out.insert(comp, mat_mul(&f, gmat, mat));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    assert_eq!(out.len(), elements.len());
    check_representation(&alg, &out);
    out
}

/// Trace pseudocharacter of a matrix representation on a group algebra.
pub fn trace_pseudocharacter(
    alg: &Arc<FlatAlgebra<Rationals>>,
    rho: &BTreeMap<Vec<usize>, Mat<BigRational>>,
    d: usize,
) -> QPsc {
    let f = Rationals;
    let values = group_elements(alg)
        .iter()
        .map(|g| {
            let m = &rho[g];
            let mut tr = f.zero();
            for i in 0..m.rows {
                tr = f.add(&tr, m.at(i, i));
            }
            tr
        })
        .collect();
    group_pseudocharacter(FieldCoeff::new(Rationals), alg.clone(), values, d).unwrap()
}

/// Character values of the regular representation.
pub fn regular_pseudocharacter(alg: &Arc<FlatAlgebra<Rationals>>) -> QPsc {
    let f = Rationals;
    let n = alg.dim;
    let values = group_elements(alg)
        .iter()
        .map(|g| {
            if g.iter().enumerate().all(|(i, &x)| x == i) {
                f.from_i64(n as i64)
            } else {
                f.zero()
            }
        })
        .collect();
    group_pseudocharacter(FieldCoeff::new(Rationals), alg.clone(), values, n).unwrap()
}

/// A linear character given on the two generators of a 2-generator group,
/// extended by multiplicativity (values must be +-1).
pub fn linear_character(
    alg: &Arc<FlatAlgebra<Rationals>>,
    gens: [(Vec<usize>, i64); 2],
) -> QPsc {
    let f = Rationals;
    let elements = group_elements(alg);
    let id: Vec<usize> = (0..elements[0].len()).collect();
    let mut vals: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    vals.insert(id, 1);
    loop {
        let mut added = false;
        let snapshot: Vec<(Vec<usize>, i64)> =
            vals.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for (perm, val) in &snapshot {
            for (gperm, gval) in &gens {
                let comp = compose(perm, gperm);
                let newval = val * gval;
                match vals.get(&comp) {
                    Some(&v) => assert_eq!(v, newval, "character not well defined"),
                    None => {
                        vals.insert(comp, newval);
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    let values = elements.iter().map(|g| f.from_i64(vals[g])).collect();
    group_pseudocharacter(FieldCoeff::new(Rationals), alg.clone(), values, 1).unwrap()
}

pub fn quadric_algebra() -> Arc<Artinian<Rationals>> {
    let f = Rationals;
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let rel = parse_mpoly(&f, &vars, "x*y - z^2").unwrap();
    Arc::new(Artinian::quotient(f, &vars, &[rel], 2).unwrap())
}

/// The quadric-cone GMA: A_{1,2} = (y, z) with plain multiplication
/// pairing against the abstract module (x, z) twisted so that the
/// products are {g1 h1 = z, g1 h2 = y, g2 h1 = x, g2 h2 = z}.
pub fn quadric_gma() -> GmaAlgebra<Rationals> {
    let a = quadric_algebra();
    let m12 = ModuleSlot::from_ideal(
        &a,
        &[a.parse_elem("y").unwrap(), a.parse_elem("z").unwrap()],
    )
    .unwrap();
    let m21 = ModuleSlot::from_ideal(
        &a,
        &[a.parse_elem("x").unwrap(), a.parse_elem("z").unwrap()],
    )
    .unwrap();
    let val = |s: &str| a.parse_elem(s).unwrap().0;
    let mut phi = BTreeMap::new();
    phi.insert(
        (0usize, 1usize, 0usize),
        vec![vec![val("z"), val("y")], vec![val("x"), val("z")]],
    );
    let slots = vec![
        vec![ModuleSlot::diagonal(&a), m12],
        vec![m21, ModuleSlot::diagonal(&a)],
    ];
    let data = GmaData::new(a, vec![1, 1], slots, phi).unwrap();
    build_gma(data).unwrap()
}

pub fn dual_numbers_t() -> Arc<Artinian<Rationals>> {
    let f = Rationals;
    let vars: Vec<String> = vec!["t".into()];
    Arc::new(Artinian::quotient(f, &vars, &[], 1).unwrap())
}

/// The two-block GMA over k[t]/(t^2) transposing the classical p-adic
/// example: A_{1,2} free of rank one on b, A_{2,1} = A c + k c' with
/// pairing b c = t, b c' = 0.
pub fn transposed_zp_gma() -> GmaAlgebra<Rationals> {
    let a = dual_numbers_t();
    let f = Rationals;
    let m12 = ModuleSlot::from_module(&a, &FiniteModule::free_rank_one(a.clone())).unwrap();
    // C = A c + k c': basis (c, tc, c'); t kills tc and c'
    let zero = || f.zero();
    let one = || f.one();
    let action_one = tracealg::linalg::identity(&f, 3);
    let action_t = Mat::from_rows(vec![
        vec![zero(), zero(), zero()],
        vec![one(), zero(), zero()],
        vec![zero(), zero(), zero()],
    ]);
    let c_mod = FiniteModule::new(
        a.clone(),
        3,
        vec![action_one, action_t],
        vec![
            vec![one(), zero(), zero()],
            vec![zero(), zero(), one()],
        ],
    )
    .unwrap();
    let m21 = ModuleSlot::from_module(&a, &c_mod).unwrap();
    let t_elem = a.parse_elem("t").unwrap().0;
    let zero_elem = a.zero().0;
    let mut phi = BTreeMap::new();
    // rows: generators of A_{1,2} (just b); cols: generators of A_{2,1}
    phi.insert((0usize, 1usize, 0usize), vec![vec![t_elem, zero_elem]]);
    let slots = vec![
        vec![ModuleSlot::diagonal(&a), m12],
        vec![m21, ModuleSlot::diagonal(&a)],
    ];
    let data = GmaData::new(a, vec![1, 1], slots, phi).unwrap();
    build_gma(data).unwrap()
}

pub fn max_ideal(a: &Arc<Artinian<Rationals>>) -> tracealg::coeff::Ideal<Rationals> {
    tracealg::coeff::Ideal::max_ideal(a.clone())
}

pub fn aelem(a: &Arc<Artinian<Rationals>>, s: &str) -> AElem<Rationals> {
    a.parse_elem(s).unwrap()
}
