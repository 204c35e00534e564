use adhmlab::adhm::{is_costable, moment_map, tangent_basis, AdhmDatum};
use adhmlab::factorization::{factorize, BlockList};
use adhmlab::forms::{standard_space, standard_space_in, FormKind};
use adhmlab::hilbert::GradedSetup;
use adhmlab::linalg::{determinant, nullspace, rank, solve, solve_sylvester};
use adhmlab::nilpotent::{associated_partitions, build_nilpotent, conjugacy_test, conjugator, partitions_of, Partition};
use adhmlab::sample::{isometry, mat, regular_so_block, rng};
use adhmlab::{Field, Mat, Scalar};
use proptest::prelude::*;

fn q() -> Field {
    Field::Rationals
}

fn flatten(d: &AdhmDatum) -> Mat {
    let entries: Vec<Scalar> = [&d.b1, &d.b2, &d.i, &d.j].iter().flat_map(|m| m.entries().to_vec()).collect();
    Mat::column(d.field(), entries)
}

fn coordinates(d: &AdhmDatum) -> Vec<Scalar> {
    let basis: Vec<Mat> = tangent_basis(d).iter().map(flatten).collect();
    let f = Mat::from_columns(d.field(), basis[0].rows(), &basis);
    solve(&f, &flatten(d)).unwrap().expect("datum lies in the data space").into_entries()
}

fn upper_triangular(field: Field, diag: &[i64], seed: u64) -> Mat {
    let mut r = rng(seed);
    let noise = mat(&mut r, field, diag.len(), diag.len(), 3);
    Mat::from_fn(field, diag.len(), diag.len(), |a, b| match a.cmp(&b) {
        std::cmp::Ordering::Equal => field.int(diag[a]),
        std::cmp::Ordering::Less => noise.get(a, b).clone(),
        std::cmp::Ordering::Greater => field.zero(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_is_an_involution(n in 0usize..12, pick in any::<prop::sample::Index>()) {
        let all = partitions_of(n);
        let p = pick.get(&all);
        prop_assert_eq!(p.dual().dual(), p.clone());
        prop_assert_eq!(p.dual().size(), n);
        prop_assert_eq!(p.dual().len(), p.parts().first().copied().unwrap_or(0));
    }

    #[test]
    fn rank_plus_nullity(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>(), modular in any::<bool>()) {
        let field = if modular { Field::prime(7).unwrap() } else { q() };
        let m = mat(&mut rng(seed), field, rows, cols, 2);
        let ker = nullspace(&m);
        prop_assert_eq!(rank(&m) + ker.len(), cols);
        for v in &ker {
            prop_assert!((&m * v).is_zero());
        }
    }

    #[test]
    fn sylvester_solution_satisfies_equation(
        a in prop::collection::btree_set(-5i64..=0, 1..4),
        b in prop::collection::btree_set(1i64..=5, 1..4),
        seed in any::<u64>(),
    ) {
        let a: Vec<i64> = a.into_iter().collect();
        let b: Vec<i64> = b.into_iter().collect();
        let ma = upper_triangular(q(), &a, seed);
        let mb = upper_triangular(q(), &b, seed.wrapping_add(1));
        let c = mat(&mut rng(seed ^ 7), q(), a.len(), b.len(), 4);
        let x = solve_sylvester(&ma, &mb, &c).unwrap();
        prop_assert_eq!(&(&ma * &x) - &(&x * &mb), c);
    }

    #[test]
    fn scalar_text_round_trips(num in -1000i64..1000, den in 1i64..1000) {
        let s = q().ratio(num, den).unwrap();
        let text = s.to_string();
        prop_assert_eq!(q().parse(&text).unwrap(), s.clone());
        let scaled = q().parse(&format!("{}/{}", 3 * num, 3 * den)).unwrap();
        prop_assert_eq!(scaled.to_string(), text);
    }

    #[test]
    fn orthogonal_build_round_trips(sizes in prop::collection::vec(1usize..4, 1..4), dup in any::<bool>()) {
        let mut parts = vec![Partition::new(sizes.clone())];
        if dup {
            parts.push(Partition::new(vec![1]));
        }
        let (b, space) = build_nilpotent(&parts, FormKind::Orthogonal).unwrap();
        prop_assert!(space.is_self_adjoint(&b));
        let got: Vec<Partition> = associated_partitions(&b).unwrap().into_iter().map(|x| x.1).collect();
        prop_assert_eq!(got, parts);
    }

    #[test]
    fn conjugated_nilpotents_are_recognized(sizes in prop::collection::vec(1usize..3, 1..3), seed in any::<u64>()) {
        let doubled: Vec<usize> = sizes.iter().flat_map(|&s| [s, s]).collect();
        let parts = vec![Partition::new(doubled)];
        let (b, space) = build_nilpotent(&parts, FormKind::Symplectic).unwrap();
        let g = isometry(&mut rng(seed), &space, 4);
        let gi = adhmlab::linalg::inverse(&g).unwrap();
        let moved = &(&g * &b) * &gi;
        prop_assert!(conjugacy_test(&b, &moved, &space).unwrap());
        let h = conjugator(&b, &moved, &space).unwrap().expect("symplectic chains always match");
        prop_assert!(space.is_isometry(&h));
        prop_assert_eq!(&h * &b, &moved * &h);
    }

    #[test]
    fn invariants_are_constant_on_orbits(seed in 0u64..40) {
        let w = standard_space(FormKind::Orthogonal, 4).unwrap();
        let mut r = rng(seed);
        let d = regular_so_block(&mut r, &w, &q().int(seed as i64 % 3), &q().int(1)).unwrap();
        prop_assert!(moment_map(&d).unwrap().is_zero());
        let g = isometry(&mut r, d.v_form().unwrap(), 3);
        let moved = d.act(&g).unwrap();
        let setup = GradedSetup::so_data(2, 4).unwrap();
        let (x, y) = (coordinates(&d), coordinates(&moved));
        for deg in 1..=2 {
            for f in setup.invariant_basis(deg).unwrap() {
                prop_assert_eq!(f.eval(&x), f.eval(&y));
            }
        }
    }
}

#[test]
fn off_diagonal_blocks_are_forced() {
    let w = standard_space(FormKind::Orthogonal, 4).unwrap();
    let mut r = rng(11);
    let a = regular_so_block(&mut r, &w, &q().int(2), &q().int(0)).unwrap();
    let b = regular_so_block(&mut r, &w, &q().int(-1), &q().int(3)).unwrap();
    assert_eq!(rank(&a.i), 2);
    let glued = factorize(&BlockList::new(vec![a, b]).unwrap()).unwrap();
    assert!(moment_map(&glued).unwrap().is_zero());
    assert!(is_costable(&glued));
    // a self-adjoint perturbation of the off-diagonal part of B2 breaks mu = 0
    let v = glued.v_form().unwrap().clone();
    let mut bump = Mat::zeros(q(), 4, 4);
    bump.set(0, 2, q().one());
    let sym = &bump + &v.adjoint(&bump);
    assert!(v.is_self_adjoint(&sym) && !sym.is_zero());
    let mut other = glued.clone();
    other.b2 = &glued.b2 + &sym;
    assert!(!moment_map(&other).unwrap().is_zero());
}

#[test]
fn isometries_have_unit_determinant_in_the_symplectic_case() {
    let s = standard_space_in(Field::prime(5).unwrap(), FormKind::Symplectic, 4).unwrap();
    for seed in 0..10 {
        let g = isometry(&mut rng(seed), &s, 5);
        assert!(s.is_isometry(&g));
        assert!(determinant(&g).unwrap().is_one());
    }
}
