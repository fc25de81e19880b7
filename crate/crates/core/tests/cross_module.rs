//! Consistency between independently built pieces of the public API.

use num_traits::Zero;
use wtower::basis::{matrix_in_basis, Basis};
use wtower::class_algebra::{characteristic_map, class_multiply, CentralElement};
use wtower::hilb::{fixed_point_transport, EquivParams};
use wtower::jack::build_jack;
use wtower::ops::{cut_and_join, ladder, w0_beta};
use wtower::partition;
use wtower::rational::{frac, q};
use wtower::{Operator, SymFun};

#[test]
fn class_algebra_matrix_equals_w2_matrix() {
    // K_[2] multiplication in the class-sum basis is the W2 matrix in v
    for n in 2..=5 {
        let m = matrix_in_basis(&cut_and_join(), n, &Basis::Normalized).unwrap();
        let k2 = CentralElement::transpositions(n);
        for (i, lambda) in m.rows.iter().enumerate() {
            let prod = class_multiply(&k2, &CentralElement::class_sum(lambda.clone())).unwrap();
            for (j, mu) in m.cols.iter().enumerate() {
                assert_eq!(prod.coeff(mu), m.matrix[(i, j)], "n={n} {lambda}->{mu}");
            }
        }
    }
}

#[test]
fn self_dual_fixed_points_are_schur_functions() {
    let params = EquivParams::new(q(1), q(-1)).unwrap();
    assert!(params.is_self_dual());
    let schur = build_jack(5, &q(1)).unwrap();
    let m = fixed_point_transport(&cut_and_join(), 5, &params).unwrap();
    for (i, lambda) in m.rows.iter().enumerate() {
        assert_eq!(m.matrix[(i, i)], q(lambda.content_sum()));
        // the class is a rescaled Schur function: W2 eigenvalue agrees
        let s = schur.get(lambda).unwrap();
        assert_eq!(cut_and_join().apply(s).unwrap(), s.scale(&q(lambda.content_sum())));
    }
    assert!(m.matrix.is_diagonal());
}

#[test]
fn jack_basis_matrix_is_diagonal_exactly_at_inverse_beta() {
    for beta in [q(2), frac(1, 3)] {
        let op = w0_beta(&beta, &q(0), false);
        let good = matrix_in_basis(&op, 4, &Basis::Jack(beta.recip())).unwrap();
        assert!(good.matrix.is_diagonal());
        let bad = matrix_in_basis(&op, 4, &Basis::Jack(beta.clone())).unwrap();
        assert!(!bad.matrix.is_diagonal());
    }
}

#[test]
fn ladder_matrix_composes_with_characteristic_map() {
    // E1 on v-coordinates agrees with E1 applied to Phi'(K_lambda)
    let e1 = ladder();
    for n in 1..=4 {
        let m = matrix_in_basis(&e1, n, &Basis::Normalized).unwrap();
        for (i, lambda) in m.rows.iter().enumerate() {
            let image = e1
                .apply(&characteristic_map(&CentralElement::class_sum(lambda.clone()), true))
                .unwrap();
            let coords = image.normalized_basis_coords();
            for (j, mu) in m.cols.iter().enumerate() {
                let c = coords.get(mu).cloned().unwrap_or_else(wtower::Q::zero);
                assert_eq!(c, m.matrix[(i, j)]);
            }
        }
    }
}

#[test]
fn operator_json_round_trip_preserves_action() {
    let w = wtower::ops::hierarchy(2, 4).unwrap();
    let back = Operator::from_json("W(2)", &w.to_json(4)).unwrap();
    for lambda in (0..=4).flat_map(partition::enumerate) {
        let f = SymFun::p(lambda);
        assert_eq!(w.apply(&f).unwrap(), back.apply(&f).unwrap());
    }
}

#[test]
fn change_of_basis_preserves_spectrum() {
    let op = w0_beta(&q(3), &q(2), false);
    let p = matrix_in_basis(&op, 4, &Basis::PowerSum).unwrap().matrix;
    let fixed = fixed_point_transport(&op, 4, &EquivParams::for_beta(&q(3)).unwrap())
        .unwrap()
        .matrix;
    assert_eq!(p.char_poly(), fixed.char_poly());
    assert_eq!(p.trace(), fixed.trace());
}
