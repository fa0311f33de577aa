use curveforms::cartier::{cartier_manin_matrix, invariants};
use curveforms::forms::{differential_basis, plane_poly, same_span};
use curveforms::{Polynomial, PrimeField};

fn k(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

#[test]
fn trigonal_quintic_over_f11() {
    let f = plane_poly(k(11), &[(&[5, 0], 1), (&[0, 5], 1), (&[1, 1], 1)]);
    let b = differential_basis(&f).unwrap();
    assert_eq!(b.genus, 5);
    assert!(!b.used_infinity_chart);
    let want = plane_poly(k(11), &[(&[2, 0], 1)]);
    assert_eq!(b.numerators[0], want);
    let expect: Vec<Polynomial> = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1]]
        .iter()
        .map(|e| plane_poly(k(11), &[(e, 1)]))
        .collect();
    assert_eq!(b.numerators, expect);
    assert_eq!(b.denominator, plane_poly(k(11), &[(&[0, 4], 1), (&[1, 0], 9)]));
    let m = cartier_manin_matrix(&b).unwrap();
    assert!(m.is_zero());
    let inv = invariants(&m).unwrap();
    assert_eq!((inv.genus, inv.a_number, inv.p_rank, inv.superspecial), (5, 5, 0, true));
}

#[test]
fn genus_three_quintic_over_f2() {
    let f = plane_poly(
        k(2),
        &[(&[5, 0], 1), (&[0, 5], 1), (&[3, 0], 1), (&[2, 1], 1), (&[1, 2], 1), (&[0, 3], 1), (&[1, 1], 1)],
    );
    let b = differential_basis(&f).unwrap();
    assert_eq!(b.genus, 3);
    let expect = vec![
        plane_poly(k(2), &[(&[2, 0], 1), (&[1, 0], 1)]),
        plane_poly(k(2), &[(&[1, 1], 1)]),
        plane_poly(k(2), &[(&[0, 2], 1), (&[0, 1], 1)]),
    ];
    assert!(same_span(&b.numerators, &expect, 2));
    assert_eq!(b.numerators, expect);
    let m = cartier_manin_matrix(&b).unwrap();
    assert_eq!(m.entries, vec![vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]);
}

#[test]
fn septic_needing_the_chart_at_infinity() {
    let f = plane_poly(k(2), &[(&[0, 7], 1), (&[4, 0], 1), (&[2, 0], 1)]);
    let b = differential_basis(&f).unwrap();
    assert!(b.used_infinity_chart);
    let p = |t: &[(&[u32], i64)]| plane_poly(k(2), t);
    let nine = vec![
        p(&[(&[4, 0], 1), (&[1, 0], 1)]),
        p(&[(&[3, 1], 1), (&[1, 1], 1)]),
        p(&[(&[2, 2], 1), (&[1, 2], 1)]),
        p(&[(&[1, 3], 1)]),
        p(&[(&[0, 4], 1)]),
        p(&[(&[3, 0], 1), (&[1, 0], 1)]),
        p(&[(&[2, 1], 1), (&[1, 1], 1)]),
        p(&[(&[0, 3], 1)]),
        p(&[(&[2, 0], 1), (&[1, 0], 1)]),
    ];
    assert!(same_span(&b.truncated, &nine, 4));
    let three = vec![p(&[(&[0, 4], 1)]), p(&[(&[0, 3], 1)]), p(&[(&[2, 0], 1), (&[1, 0], 1)])];
    assert_eq!(b.numerators, three);
    let m = cartier_manin_matrix(&b).unwrap();
    assert_eq!(m.entries, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]]);
}
