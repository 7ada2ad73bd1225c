//! Worked examples for every module, each checked against a hand-computed
//! value.

mod common;

use stieltjes_core::matcore::{
    c64, identity, is_dubovoj, is_psd, one_two_inverse, projector, pseudo_inverse,
    range_included, real_diag, real_matrix, scalar, zeros, CMatrix, Subspace, ToleranceConfig,
    C64,
};
use stieltjes_core::momentseq::{
    canonical_extension, class_membership, schur_ladder, MomentSequence,
};
use stieltjes_core::potapov::{
    congruence_check, fq_matrices, potapov_matrix, potapov_report, psi_polynomial, sigma_matrix,
    FunctionSamples,
};
use stieltjes_core::resolvent::{
    build_resolvent, monomial_stack, resolvent_at, shift_matrix, standard_grid, JDefectVariant,
};
use stieltjes_core::solver::{
    classify, lft_solution, lift_pair, recover_s0, unique_solution, verify_solution, Candidate,
    DegeneracyCase,
};
use stieltjes_core::stieltjes::{
    moments_of, pair_eval, pair_in_restricted_class, pair_is_valid, pairs_equivalent,
    sharp_measure, transform, validity_grid, equivalence_grid, AtomicMeasure, StieltjesFunction,
    StieltjesPair,
};
use stieltjes_core::Error;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn i() -> C64 {
    c64(0.0, 1.0)
}

fn close(a: &CMatrix, b: &CMatrix, eps: f64) -> bool {
    a.shape() == b.shape() && (a - b).norm() <= eps
}

fn s(values: &[f64]) -> MomentSequence {
    MomentSequence::scalar(0.0, values).unwrap()
}

fn pair(phi: f64, psi: f64) -> StieltjesPair {
    StieltjesPair::constant(real_matrix(&[&[phi]]), real_matrix(&[&[psi]]), &tol()).unwrap()
}

mod matcore_examples {
    use super::*;

    #[test]
    fn pseudo_inverse_of_zero_identity_and_ones() {
        let t = tol();
        assert!(close(&pseudo_inverse(&zeros(1, 1), &t).unwrap(), &zeros(1, 1), 0.0));
        assert!(close(&pseudo_inverse(&identity(3), &t).unwrap(), &identity(3), 1e-14));
        let ones = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let expected = ones.scale(0.25);
        assert!(close(&pseudo_inverse(&ones, &t).unwrap(), &expected, 1e-14));
    }

    #[test]
    fn psd_checks() {
        let t = tol();
        assert!(is_psd(&real_diag(&[1.0, 0.0]), &t).unwrap());
        assert!(!is_psd(&real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), &t).unwrap());
        assert!(!is_psd(&real_matrix(&[&[1.0, 2.0], &[2.0, 1.0]]), &t).unwrap());
    }

    #[test]
    fn range_inclusion_examples() {
        let t = tol();
        let a = real_matrix(&[&[3.0, -1.0], &[0.5, 2.0]]);
        assert!(range_included(&identity(2), &a, &t).unwrap());
        let b = real_matrix(&[&[0.0], &[1.0]]);
        let a = real_matrix(&[&[1.0], &[0.0]]);
        assert!(!range_included(&b, &a, &t).unwrap());
        let b = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let a = real_matrix(&[&[2.0], &[2.0]]);
        assert!(range_included(&b, &a, &t).unwrap());
    }

    #[test]
    fn one_two_inverse_examples() {
        let t = tol();
        let ones = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let e1 = Subspace::span(&real_matrix(&[&[1.0], &[0.0]]), &t);
        let x = one_two_inverse(&ones, &e1, &t).unwrap();
        assert!(close(&x, &real_diag(&[1.0, 0.0]), 1e-14));
        assert!(close(&(&ones * &x * &ones), &ones, 1e-14));
        assert!(close(&(&x * &ones * &x), &x, 1e-14));
        let full = Subspace::full(3);
        assert!(close(&one_two_inverse(&identity(3), &full, &t).unwrap(), &identity(3), 1e-14));
        let none = Subspace::zero(1);
        assert!(close(&one_two_inverse(&zeros(1, 1), &none, &t).unwrap(), &zeros(1, 1), 0.0));
    }

    #[test]
    fn one_two_inverse_rejects_subspace_meeting_null_space() {
        let t = tol();
        let ones = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let null = Subspace::span(&real_matrix(&[&[1.0], &[-1.0]]), &t);
        assert!(matches!(one_two_inverse(&ones, &null, &t), Err(Error::DirectSum(_))));
    }

    #[test]
    fn dubovoj_candidates_from_ladders() {
        let t = tol();
        let l = schur_ladder(&s(&[1.0, 1.0, 1.0]), &t).unwrap().l;
        let d = stieltjes_core::matcore::dubovoj_subspace(&l, &t).unwrap();
        assert_eq!(d.dim(), 1);
        assert!(close(&d.projector(), &real_diag(&[1.0, 0.0]), 1e-14));

        let l = schur_ladder(&s(&[0.0, 0.0, 1.0]), &t).unwrap().l;
        let d = stieltjes_core::matcore::dubovoj_subspace(&l, &t).unwrap();
        assert!(close(&d.projector(), &real_diag(&[0.0, 1.0]), 1e-14));

        let d = stieltjes_core::matcore::dubovoj_subspace(&[identity(2)], &t).unwrap();
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn dubovoj_property_examples() {
        let t = tol();
        let shift = shift_matrix(1, 1);
        let e1 = Subspace::span(&real_matrix(&[&[1.0], &[0.0]]), &t);
        let ones = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(is_dubovoj(&e1, &ones, &shift, &t).unwrap());
        let e2 = Subspace::span(&real_matrix(&[&[0.0], &[1.0]]), &t);
        assert!(!is_dubovoj(&e2, &real_diag(&[0.0, 1.0]), &shift, &t).unwrap());
        let arbitrary = real_matrix(&[&[0.3, 1.0], &[-2.0, 0.1]]);
        assert!(is_dubovoj(&Subspace::full(2), &identity(2), &arbitrary, &t).unwrap());
    }

    #[test]
    fn projector_examples() {
        let t = tol();
        assert!(close(&projector(&Subspace::full(2)), &identity(2), 1e-15));
        assert!(close(&projector(&Subspace::zero(2)), &zeros(2, 2), 0.0));
        let diag = Subspace::span(&real_matrix(&[&[1.0], &[1.0]]), &t);
        let expected = real_matrix(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(close(&projector(&diag), &expected, 1e-15));
    }
}

mod momentseq_examples {
    use super::*;

    #[test]
    fn shifted_sequences() {
        assert!(close(&s(&[1.0, 1.0]).shift_right().unwrap().s(0).unwrap(), &scalar(c64(1.0, 0.0)), 0.0));
        let shifted = MomentSequence::scalar(2.0, &[1.0, 3.0]).unwrap().shift_right().unwrap();
        assert_eq!(shifted.last_index(), 0);
        assert!(close(&shifted.s(0).unwrap(), &scalar(c64(1.0, 0.0)), 0.0));
        let m: Vec<CMatrix> = (0..3)
            .map(|k| real_matrix(&[&[k as f64, 1.0], &[1.0, 2.0 * k as f64]]))
            .collect();
        let seq = MomentSequence::new(0.0, m.clone(), &tol()).unwrap();
        let shifted = seq.shift_right().unwrap();
        assert!(close(&shifted.s(0).unwrap(), &m[1], 0.0));
        assert!(close(&shifted.s(1).unwrap(), &m[2], 0.0));
    }

    #[test]
    fn hankel_blocks() {
        let ones = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(close(&s(&[1.0, 1.0, 1.0]).hankel(1).unwrap(), &ones, 0.0));
        let u = s(&[1.0, 0.0, 0.0]).u_vec(1).unwrap();
        assert!(close(&u, &real_matrix(&[&[0.0], &[-1.0]]), 0.0));
        let hs = s(&[1.0, 1.0, 1.0, 1.0]).hankel_shifted(1).unwrap();
        assert!(close(&hs, &ones, 0.0));
    }

    #[test]
    fn schur_ladders() {
        let t = tol();
        let l = schur_ladder(&s(&[1.0, 1.0, 1.0]), &t).unwrap().l;
        assert!((l[0][(0, 0)].re - 1.0).abs() < 1e-15 && l[1].norm() < 1e-15);
        let l = schur_ladder(&s(&[0.0, 0.0, 1.0]), &t).unwrap().l;
        assert!(l[0].norm() == 0.0 && (l[1][(0, 0)].re - 1.0).abs() < 1e-15);
        let l = schur_ladder(&s(&[2.5]), &t).unwrap().l;
        assert_eq!(l.len(), 1);
        assert!((l[0][(0, 0)].re - 2.5).abs() < 1e-15);
    }

    #[test]
    fn class_membership_examples() {
        let t = tol();
        let all = class_membership(&s(&[1.0, 1.0, 1.0, 1.0]), &t).unwrap();
        assert!(all.in_hgeq && all.in_hgeq_e && all.in_kgeq && all.in_kgeq_e);
        let bad = class_membership(&s(&[1.0, -1.0]), &t).unwrap();
        assert!(!bad.in_kgeq);
        let thiele = class_membership(&s(&[0.0, 0.0, 1.0]), &t).unwrap();
        assert!(thiele.in_hgeq && !thiele.in_hgeq_e);
    }

    #[test]
    fn canonical_extensions() {
        let t = tol();
        let next = canonical_extension(&s(&[1.0, 1.0]), &t).unwrap();
        assert!((next[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-14);
        let next = canonical_extension(&s(&[1.0, 0.0]), &t).unwrap();
        assert!(next.norm() < 1e-14);
        let seq = MomentSequence::new(0.0, vec![identity(2)], &t).unwrap();
        assert!(canonical_extension(&seq, &t).unwrap().norm() < 1e-14);
    }

    #[test]
    fn zero_start_forces_zero_moments() {
        // A sequence with s_0 = 0 and nonnegative Hankel matrix vanishes up
        // to index 2n - 1.
        let t = tol();
        let seq = s(&[0.0, 0.0, 0.0, 0.0, 3.0]);
        assert!(class_membership(&seq, &t).unwrap().in_hgeq);
        let seq = s(&[0.0, 0.0, 0.0, 1.0, 3.0]);
        assert!(!class_membership(&seq, &t).unwrap().in_hgeq);
    }
}

mod resolvent_examples {
    use super::*;

    #[test]
    fn shift_and_resolvent() {
        assert!(close(&shift_matrix(1, 0), &zeros(1, 1), 0.0));
        assert!(close(&resolvent_at(1, 0, c64(5.0, 1.0)), &identity(1), 0.0));
        let z = c64(2.0, -1.0);
        let r = resolvent_at(1, 1, z);
        let expected = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), z, c64(1.0, 0.0)]);
        assert!(close(&r, &expected, 0.0));
        assert!(close(&resolvent_at(3, 2, c64(0.0, 0.0)), &identity(9), 0.0));
    }

    #[test]
    fn monomial_stacks() {
        assert!(close(&monomial_stack(2, 0, c64(3.0, 0.0)), &identity(2), 0.0));
        let e = monomial_stack(1, 2, c64(2.0, 0.0));
        assert!(close(&e, &real_matrix(&[&[1.0], &[2.0], &[4.0]]), 0.0));
    }

    #[test]
    fn theta_closed_forms() {
        let t = tol();
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        let r10 = build_resolvent(&s(&[1.0, 0.0]), 0, &t).unwrap();
        let r11 = build_resolvent(&s(&[1.0, 1.0]), 0, &t).unwrap();
        for z in [c64(0.0, 1.0), c64(-2.0, 0.5), c64(3.0, 0.0)] {
            let e10 = CMatrix::from_row_slice(2, 2, &[one, zero, -z, one]);
            let e11 = CMatrix::from_row_slice(2, 2, &[one, one, -z, one - z]);
            assert!(close(&r10.eval_theta(z, false), &e10, 1e-14));
            assert!(close(&r11.eval_theta(z, false), &e11, 1e-14));
            let det = r11.eval_theta(z, false).determinant();
            assert!((det - one).norm() < 1e-13);
        }
        let rr = build_resolvent(&common::kgeq_fixtures(6, 5)[4].seq, 1, &t).unwrap();
        let a = c64(rr.alpha(), 0.0);
        let q = rr.q();
        assert!(rr.eval_theta(a, false).view((q, 0), (q, q)).norm() < 1e-12);
    }

    #[test]
    fn theta_at_zero_and_tilde_scaling() {
        let r = build_resolvent(&s(&[1.0, 1.0]), 0, &tol()).unwrap();
        let expected = real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(close(&r.eval_theta(c64(0.0, 0.0), false), &expected, 1e-14));
        let q = r.q();
        let at_alpha = r.eval_theta(c64(r.alpha(), 0.0), false);
        assert!(at_alpha.view((q, 0), (q, q)).norm() < 1e-14);
        for z in [c64(1.5, -0.5), c64(-2.0, 0.0), c64(0.3, 2.0)] {
            assert!(close(&r.eval_theta(z, true), &r.scaled_theta(z).unwrap(), 1e-13));
        }
    }

    #[test]
    fn theta_inverse_examples() {
        let r = build_resolvent(&s(&[1.0, 0.0]), 0, &tol()).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), i(), c64(1.0, 0.0)]);
        assert!(close(&r.theta_inverse(i()), &expected, 1e-14));
        let x = c64(0.7, 0.0);
        let prod = r.eval_theta(x, false) * r.theta_inverse(x);
        assert!(close(&prod, &identity(2), 1e-14));
    }

    #[test]
    fn j_defect_examples() {
        let r = build_resolvent(&s(&[1.0, 1.0]), 0, &tol()).unwrap();
        let x = c64(-0.4, 0.0);
        let (lhs, _) = r.j_defect(x, x, JDefectVariant::Theta).unwrap();
        assert!(lhs.norm() < 1e-14);
        let (lhs, rhs) = r.j_defect(i(), i(), JDefectVariant::Theta).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12);
        let rr = build_resolvent(&common::kgeq_fixtures(9, 8)[7].seq, 2, &tol()).unwrap();
        let (z, w) = (c64(0.3, 1.2), c64(-1.0, -0.4));
        let (lhs, rhs) = rr.j_defect(z, w, JDefectVariant::ThetaTilde).unwrap();
        let scale = 1.0 + rr.eval_theta(z, true).norm() * rr.eval_theta(w, true).norm();
        assert!((lhs - rhs).norm() <= 1e-10 * scale);
    }

    #[test]
    fn kernel_polynomials() {
        let t = tol();
        let r = build_resolvent(&s(&[1.0, 0.0]), 0, &t).unwrap();
        let (p, q, s_poly) = r.kernel_polys();
        for z in [c64(0.0, 0.0), c64(2.0, 1.0)] {
            for poly in [&p, &q, &s_poly] {
                assert!(close(&poly.eval(z), &identity(1), 1e-14));
            }
        }
        let fx = &common::nondegenerate_fixtures(3, 9)[2];
        let r = build_resolvent(&fx.seq, fx.n, &t).unwrap();
        let (p, q, s_poly) = r.kernel_polys();
        let dim = (fx.n + 1) * fx.seq.q();
        for poly in [&p, &q, &s_poly] {
            assert!(close(&poly.eval(c64(1.5, -0.5)), &identity(dim), 1e-9));
            assert!(close(&poly.eval(c64(r.alpha(), 0.0)), &identity(dim), 1e-9));
        }
    }
}

mod potapov_examples {
    use super::*;

    fn one_over_one_minus_z() -> FunctionSamples<impl Fn(C64) -> CMatrix> {
        FunctionSamples::new(1, |z: C64| scalar(1.0 / (c64(1.0, 0.0) - z)))
    }

    #[test]
    fn potapov_matrices_at_i() {
        let seq = s(&[1.0, 1.0]);
        let f = one_over_one_minus_z();
        let half = c64(0.5, 0.5);
        let expected = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), half, half.conj(), c64(0.5, 0.0)]);
        let p0 = potapov_matrix(&seq, &f, i(), 0).unwrap();
        assert!(close(&p0, &expected, 1e-14));
        assert!(stieltjes_core::matcore::lambda_min(&p0).abs() < 1e-14);
        let p1 = potapov_matrix(&seq, &f, i(), 1).unwrap();
        assert!(close(&p1, &expected, 1e-14));
        let g = FunctionSamples::new(1, |z: C64| scalar(-1.0 / z));
        let pm = potapov_matrix(&seq, &g, i(), -1).unwrap();
        assert!(pm.norm() < 1e-15);
    }

    #[test]
    fn potapov_rejects_real_points() {
        let f = one_over_one_minus_z();
        assert!(matches!(
            potapov_matrix(&s(&[1.0, 1.0]), &f, c64(-1.0, 0.0), 0),
            Err(Error::RealPoint(_))
        ));
    }

    #[test]
    fn schur_complements() {
        let t = tol();
        let seq = s(&[1.0, 1.0]);
        let f = one_over_one_minus_z();
        assert!(sigma_matrix(&seq, &f, i(), 0, &t).unwrap().norm() < 1e-14);
        let c = FunctionSamples::new(1, |_| scalar(c64(2.0, 0.0)));
        let sigma = sigma_matrix(&seq, &c, c64(1.0, 2.0), 0, &t).unwrap();
        assert!(sigma[(0, 0)].re <= 1e-14);
    }

    #[test]
    fn f_and_q_matrices() {
        let seq = s(&[1.0, 1.0]);
        let f = one_over_one_minus_z();
        let z = c64(0.5, 2.0);
        let (big_f, big_q) = fq_matrices(&seq, &f, z, 0).unwrap();
        assert!(close(&big_f, &scalar(1.0 / (c64(1.0, 0.0) - z)), 1e-15));
        assert_eq!(big_q[(0, 0)], seq.hankel(0).unwrap()[(0, 0)]);
    }

    #[test]
    fn psi_polynomials() {
        let seq = s(&[1.0, 1.0, 1.0, 1.0]);
        let p0 = psi_polynomial(&seq, 0).unwrap();
        assert!(p0.eval(c64(1.3, 0.2)).norm() == 0.0);
        let p2 = psi_polynomial(&seq, 2).unwrap().eval(c64(0.0, 0.0));
        assert!(close(&p2, &real_matrix(&[&[0.0, 1.0], &[1.0, 1.0]]), 1e-15));
        // For n = 0 the odd polynomial reduces to the constant y_{0,0} = s_0.
        let p1 = psi_polynomial(&seq, 1).unwrap().eval(c64(2.0, 1.0));
        assert!(close(&p1, &seq.hankel(0).unwrap(), 0.0));
    }

    #[test]
    fn congruence_at_one_plus_i() {
        let mut rng = common::rng(17);
        let seq = common::random_hermitian_sequence(&mut rng, 0.5, 2, 5);
        let f = common::random_stieltjes_function(&mut rng, 0.5, 2, 2);
        for k in 0..=5 {
            let res = congruence_check(&seq, &f, c64(1.0, 1.0), k).unwrap();
            assert!(res.max() <= 1e-10 * res.scale, "k = {k}: {res:?}");
        }
        let res = congruence_check(&seq, &f, c64(1.0, 1.0), 0).unwrap();
        assert!(res.q_from_p == 0.0 && res.p_from_q == 0.0);
    }

    #[test]
    fn potapov_report_examples() {
        let t = tol();
        let delta1 = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
        let seq = moments_of(&delta1, 3);
        let grid = standard_grid(0.0);
        assert!(potapov_report(&seq, 1, &delta1, &grid, &t).unwrap().pass);
        let f = one_over_one_minus_z();
        assert!(!potapov_report(&s(&[1.0, 0.0]), 0, &f, &grid, &t).unwrap().pass);
        // A constant Hermitian f has a zero corner block, so P_0 is
        // nonnegative only for f = 0.
        let zero = FunctionSamples::new(1, |_| zeros(1, 1));
        let p0 = potapov_matrix(&s(&[10.0]), &zero, c64(0.0, 1.0), 0).unwrap();
        assert!(is_psd(&p0, &t).unwrap());
        let c = FunctionSamples::new(1, |_| scalar(c64(0.5, 0.0)));
        let p0 = potapov_matrix(&s(&[10.0]), &c, c64(0.0, 1.0), 0).unwrap();
        assert!(!is_psd(&p0, &t).unwrap());
        assert!(matches!(potapov_report(&seq, 1, &delta1, &[], &t), Err(Error::EmptyGrid)));
    }
}

mod stieltjes_examples {
    use super::*;

    #[test]
    fn moments_of_measures() {
        let delta1 = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
        let m = moments_of(&delta1, 3);
        assert!(m.moments().iter().all(|x| close(x, &identity(1), 0.0)));
        let empty = AtomicMeasure::empty(0.0, 2);
        assert!(moments_of(&empty, 4).moments().iter().all(|x| x.norm() == 0.0));
        let two = AtomicMeasure::scalar(0.0, &[(0.0, 0.5), (2.0, 0.5)]).unwrap();
        let m = moments_of(&two, 2);
        let values: Vec<f64> = m.moments().iter().map(|x| x[(0, 0)].re).collect();
        assert_eq!(values, vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn transforms() {
        let delta1 = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
        assert!(close(&transform(&delta1, i()).unwrap(), &scalar(c64(0.5, 0.5)), 1e-15));
        assert!(transform(&AtomicMeasure::empty(0.0, 1), i()).unwrap().norm() == 0.0);
        let two = AtomicMeasure::scalar(0.0, &[(0.0, 0.5), (2.0, 0.5)]).unwrap();
        let value = transform(&two, c64(-1.0, 0.0)).unwrap()[(0, 0)].re;
        assert!((value - (0.5 / 1.0 + 0.5 / 3.0)).abs() < 1e-15);
        assert!(matches!(transform(&delta1, c64(1.0, 0.0)), Err(Error::OnSlit(_))));
        assert!(matches!(transform(&delta1, c64(3.0, 0.0)), Err(Error::OnSlit(_))));
    }

    #[test]
    fn sharp_measures() {
        let at_alpha = AtomicMeasure::scalar(0.5, &[(0.5, 2.0)]).unwrap();
        assert!(sharp_measure(&at_alpha).total_mass().norm() == 0.0);
        let delta1 = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
        assert_eq!(sharp_measure(&delta1), delta1);
        let two = AtomicMeasure::scalar(0.0, &[(0.0, 1.0), (2.0, 1.0)]).unwrap();
        let sharp = sharp_measure(&two);
        assert!(close(&sharp.atoms()[1].1, &scalar(c64(2.0, 0.0)), 0.0));
        let ms = moments_of(&sharp, 2);
        let m = moments_of(&two, 3);
        for j in 0..=2 {
            assert!(close(&ms.moments()[j], &m.moments()[j + 1], 1e-14));
        }
    }

    #[test]
    fn pair_evaluation() {
        let t = tol();
        let z = c64(-0.3, 1.7);
        let (phi, psi) = pair_eval(&pair(0.0, 1.0), z).unwrap();
        assert!(phi.norm() == 0.0 && close(&psi, &identity(1), 0.0));
        let delta1 = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
        let f = StieltjesPair::function(StieltjesFunction::from_measure(delta1));
        let (phi, psi) = pair_eval(&f, i()).unwrap();
        assert!(close(&phi, &scalar(c64(0.5, 0.5)), 1e-15) && close(&psi, &identity(1), 0.0));

        let seq = MomentSequence::new(
            0.0,
            vec![real_diag(&[1.0, 1.0]), real_diag(&[1.0, 0.0])],
            &t,
        )
        .unwrap();
        let report = classify(&seq, 0, &t).unwrap();
        assert_eq!((report.m, report.l, report.r), (0, 1, 1));
        let lifted = lift_pair(&report, pair(0.0, 1.0)).unwrap();
        let (phi, psi) = pair_eval(&lifted, z).unwrap();
        let w = &report.w;
        assert!(close(&phi, &(w * real_diag(&[0.0, 1.0])), 1e-14));
        assert!(close(&psi, &(w * real_diag(&[1.0, 0.0])), 1e-14));
    }

    #[test]
    fn pair_validity() {
        let t = tol();
        let grid = validity_grid(0.0);
        assert!(pair_is_valid(&pair(0.0, 1.0), &grid, 0.0, &t).unwrap());
        assert!(pair_is_valid(&pair(1.0, 0.0), &grid, 0.0, &t).unwrap());
        assert!(!pair_is_valid(&pair(1.0, -1.0), &grid, 0.0, &t).unwrap());
        let mut rng = common::rng(3);
        let f = common::random_stieltjes_function(&mut rng, 0.0, 2, 3);
        assert!(pair_is_valid(&StieltjesPair::function(f), &grid, 0.0, &t).unwrap());
    }

    #[test]
    fn restricted_class() {
        let t = tol();
        let fx = &common::nondegenerate_fixtures(2, 4)[1];
        let q = fx.seq.q();
        let p = StieltjesPair::constant(identity(q), identity(q).scale(2.0), &t).unwrap();
        assert!(pair_in_restricted_class(&p, &fx.seq, fx.n, &t).unwrap());
        assert!(pair_in_restricted_class(&pair(1.0, 0.0), &s(&[1.0, 0.0]), 0, &t).unwrap());
        assert!(!pair_in_restricted_class(&pair(0.0, 1.0), &s(&[1.0, 0.0]), 0, &t).unwrap());
    }

    #[test]
    fn pair_equivalence() {
        let grid = equivalence_grid(0.0);
        let p = pair(0.3, 1.0);
        let p2 = p.clone().scaled(identity(1).scale(2.0)).unwrap();
        assert!(pairs_equivalent(&p, &p2, &grid, 1e-10).unwrap());
        assert!(!pairs_equivalent(&pair(0.0, 1.0), &pair(1.0, 0.0), &grid, 1e-10).unwrap());
        let mut rng = common::rng(5);
        let f = StieltjesPair::function(common::random_stieltjes_function(&mut rng, 0.0, 2, 2));
        let g = real_matrix(&[&[1.0, 2.0], &[0.0, -1.0]]);
        let fg = f.clone().scaled(g).unwrap();
        assert!(pairs_equivalent(&f, &fg, &grid, 1e-10).unwrap());
    }

    #[test]
    fn invalid_measures_are_rejected() {
        let t = tol();
        let below = AtomicMeasure::new(0.0, 1, vec![(-1.0, identity(1))], &t);
        assert!(matches!(below, Err(Error::InvalidMeasure(_))));
        let negative = AtomicMeasure::new(0.0, 1, vec![(1.0, identity(1).scale(-1.0))], &t);
        assert!(negative.is_err());
        let merged = AtomicMeasure::new(0.0, 1, vec![(2.0, identity(1)), (1.0, identity(1)), (2.0, identity(1))], &t)
            .unwrap();
        assert_eq!(merged.atoms().len(), 2);
        assert!(merged.atoms()[0].0 < merged.atoms()[1].0);
        assert!(close(&merged.atoms()[1].1, &identity(1).scale(2.0), 0.0));
    }
}

mod solver_examples {
    use super::*;

    fn q2_fixture() -> MomentSequence {
        MomentSequence::new(0.0, vec![real_diag(&[1.0, 0.0]), zeros(2, 2)], &tol()).unwrap()
    }

    #[test]
    fn classification_examples() {
        let t = tol();
        let r = classify(&s(&[1.0, 1.0]), 0, &t).unwrap();
        assert_eq!((r.m, r.l, r.r, r.case), (0, 0, 1, DegeneracyCase::NonDegenerate));
        let r = classify(&s(&[1.0, 0.0]), 0, &t).unwrap();
        assert_eq!((r.m, r.l, r.r, r.case), (0, 1, 0, DegeneracyCase::CompletelyDegenerate));
        let r = classify(&q2_fixture(), 0, &t).unwrap();
        assert_eq!((r.m, r.l, r.r, r.case), (1, 1, 0, DegeneracyCase::CompletelyDegenerate));
        let ww = r.w.adjoint() * &r.w;
        assert!(close(&ww, &identity(2), 1e-14));
        let overlap = r.u.basis().adjoint() * r.v.basis();
        assert!(overlap.norm() < 1e-14);
        assert!(matches!(classify(&s(&[1.0, -1.0]), 0, &t), Err(Error::NotInClass(_))));
    }

    #[test]
    fn lifting_examples() {
        let t = tol();
        let r = classify(&s(&[1.0, 1.0]), 0, &t).unwrap();
        let lifted = lift_pair(&r, pair(0.0, 1.0)).unwrap();
        let (phi, psi) = pair_eval(&lifted, i()).unwrap();
        assert!(phi.norm() == 0.0 && close(&psi, &identity(1), 0.0));

        let r = classify(&s(&[1.0, 0.0]), 0, &t).unwrap();
        let fixed = lift_pair(&r, pair(0.0, 1.0)).unwrap();
        let (phi, psi) = pair_eval(&fixed, i()).unwrap();
        assert!((phi[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(psi.norm() == 0.0);

        let r = classify(&s(&[1.0, 1.0]), 0, &t).unwrap();
        let two = StieltjesPair::constant(identity(2), identity(2), &t).unwrap();
        assert!(matches!(lift_pair(&r, two), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn lifting_with_diagonal_w() {
        // s_0 = s_1 = diag(1, 0): U is spanned by e_2, V is trivial and the
        // complement is spanned by e_1, so W is diagonal.
        let t = tol();
        let d = real_diag(&[1.0, 0.0]);
        let seq = MomentSequence::new(0.0, vec![d.clone(), d], &t).unwrap();
        let r = classify(&seq, 0, &t).unwrap();
        assert_eq!((r.m, r.l, r.r, r.case), (1, 0, 1, DegeneracyCase::Degenerate));
        assert!(r.w[(0, 1)].norm() < 1e-14 && r.w[(1, 0)].norm() < 1e-14);
        let lifted = lift_pair(&r, pair(0.0, 1.0)).unwrap();
        let (phi, psi) = pair_eval(&lifted, i()).unwrap();
        assert!(phi.norm() < 1e-14);
        assert!(close(&psi, &r.w, 1e-14));
        assert!(close(&(&psi * psi.adjoint()), &identity(2), 1e-14));
    }

    #[test]
    fn lft_closed_forms() {
        let t = tol();
        let r = build_resolvent(&s(&[1.0, 1.0]), 0, &t).unwrap();
        let delta1 = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
        let f = StieltjesPair::function(StieltjesFunction::from_measure(delta1));
        let s01 = lft_solution(&r, pair(0.0, 1.0)).unwrap();
        let s10 = lft_solution(&r, pair(1.0, 0.0)).unwrap();
        let sf = lft_solution(&r, f).unwrap();
        let one = c64(1.0, 0.0);
        for z in [i(), c64(-2.0, 0.3), c64(0.5, -1.0)] {
            assert!((s01.value(z).unwrap()[(0, 0)] - one / (one - z)).norm() < 1e-14);
            assert!((s10.value(z).unwrap()[(0, 0)] + one / z).norm() < 1e-14);
            let expected = (2.0 - z) / (z * z - 3.0 * z + 1.0);
            assert!((sf.value(z).unwrap()[(0, 0)] - expected).norm() < 1e-13);
        }
        assert!(matches!(s10.value(c64(0.0, 0.0)), Err(Error::OnSlit(_))));
    }

    #[test]
    fn lft_rejects_pairs_outside_the_restricted_class() {
        let t = tol();
        let r = build_resolvent(&s(&[1.0, 0.0]), 0, &t).unwrap();
        assert!(matches!(lft_solution(&r, pair(0.0, 1.0)), Err(Error::InvalidPair(_))));
    }

    #[test]
    fn unique_solutions() {
        let t = tol();
        let u = unique_solution(&s(&[1.0, 0.0]), 0, &t).unwrap();
        let u2 = unique_solution(&q2_fixture(), 0, &t).unwrap();
        for z in [i(), c64(-1.0, 0.0), c64(2.0, -3.0)] {
            assert!((u.value(z).unwrap()[(0, 0)] + 1.0 / z).norm() < 1e-14);
            let mut expected = zeros(2, 2);
            expected[(0, 0)] = -1.0 / z;
            assert!(close(&u2.value(z).unwrap(), &expected, 1e-14));
        }
        let s0 = recover_s0(&u).unwrap();
        assert!(close(&s0, &identity(1), 1e-12));
        let s0 = recover_s0(&u2).unwrap();
        assert!(close(&s0, &real_diag(&[1.0, 0.0]), 1e-12));
        assert!(matches!(unique_solution(&s(&[1.0, 1.0]), 0, &t), Err(Error::WrongCase(_))));
    }

    #[test]
    fn s0_recovery() {
        let f = FunctionSamples::new(1, |z: C64| scalar(-1.0 / z));
        assert!(close(&recover_s0(&f).unwrap(), &identity(1), 1e-15));
        let f = FunctionSamples::new(1, |z: C64| scalar(1.0 / (1.0 - z)));
        assert!(close(&recover_s0(&f).unwrap(), &identity(1), 1e-5));
        let f = FunctionSamples::new(1, |z: C64| scalar((2.0 - z) / (z * z - 3.0 * z + 1.0)));
        assert!(close(&recover_s0(&f).unwrap(), &identity(1), 1e-4));
    }

    #[test]
    fn verification_examples() {
        let t = tol();
        let grid = standard_grid(0.0);
        let delta1 = AtomicMeasure::scalar(0.0, &[(1.0, 1.0)]).unwrap();
        let delta0 = AtomicMeasure::scalar(0.0, &[(0.0, 1.0)]).unwrap();
        let ok = verify_solution(&s(&[1.0, 1.0]), 0, Candidate::Measure(&delta1), &grid, &t).unwrap();
        assert!(ok.valid);
        assert!(ok.defect_lambda_min.unwrap().abs() < 1e-14);
        let ok = verify_solution(&s(&[1.0, 1.0]), 0, Candidate::Measure(&delta0), &grid, &t).unwrap();
        assert!(ok.valid);
        assert!((ok.defect_lambda_min.unwrap() - 1.0).abs() < 1e-14);
        let bad = verify_solution(&s(&[1.0, 0.0]), 0, Candidate::Measure(&delta1), &grid, &t).unwrap();
        assert!(!bad.valid);
        assert!((bad.defect_lambda_min.unwrap() + 1.0).abs() < 1e-14);
    }
}
