#![allow(clippy::needless_range_loop)]

mod common;

use common::{fd_curl, names, random_polynomial, rng};
use contact_thermo::ferroelectric::{self, FerroelectricConstitutive};
use contact_thermo::geometry::{is_closed_at, reconstruct_potential, ContactChart, OneForm, DEFAULT_CLOSED_TOL};
use contact_thermo::legendre::{ConstitutiveSurface, GibbsConnection, LegendreSurface};
use contact_thermo::numerics::sampling::SampleBox;
use contact_thermo::processes::{admissibility, entropy_action, lifted_action, AdmissibilityOptions, ProcessCurve};
use contact_thermo::tensor::IDENTITY;
use contact_thermo::thermoelastic::{self, ThermoelasticConstitutive, ThermoelasticForcing, ThermoelasticState};
use contact_thermo::{Binding, ScalarField};
use rand::Rng;

#[test]
fn curl_matches_central_differences() {
    let coords = names(&["a", "b", "c", "d"]);
    let mut r = rng(11);
    for _ in 0..10 {
        let texts: Vec<String> = (0..4)
            .map(|_| format!("{} + 0.3*exp(0.5*a*b) - ln(2 + c^2)", random_polynomial(&mut r, &coords, 6, 3, 1.0)))
            .collect();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let form = OneForm::parse(&["a", "b", "c", "d"], &refs).unwrap();
        let x: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
        let exact = form.d_residual_at(&x).unwrap();
        let fd = fd_curl(|y| form.eval_at(y).unwrap(), &x, 1e-5);
        for i in 0..4 {
            for j in 0..4 {
                assert!((exact.rows[i][j] - fd[i][j]).abs() < 1e-7, "{i}{j}: {} vs {}", exact.rows[i][j], fd[i][j]);
            }
        }
    }
}

fn thermo_box() -> SampleBox {
    let mut lo = vec![0.5];
    let mut hi = vec![1.5];
    lo.extend(IDENTITY.iter().map(|v| v - 0.2));
    hi.extend(IDENTITY.iter().map(|v| v + 0.2));
    lo.extend([-0.5; 3]);
    hi.extend([0.5; 3]);
    SampleBox::new(lo, hi)
}

#[test]
fn thermoelastic_potential_forms_are_closed() {
    let coords = thermoelastic::base_coords();
    let mut r = rng(5);
    let pts = thermo_box().halton(16, 3);
    for _ in 0..3 {
        let u = format!("4*eps + {}", random_polynomial(&mut r, &coords, 12, 3, 0.5));
        let c = ThermoelasticConstitutive::parse(&u, 1.7, 1.0).unwrap();
        let form = c.entropy_form().unwrap();
        let rep = is_closed_at(&form, &pts, DEFAULT_CLOSED_TOL).unwrap();
        assert!(rep.closed, "{u}: {}", rep.max_residual);
        // independent check of the same statement by differences
        let fd = fd_curl(|y| form.eval_at(y).unwrap(), &pts[0], 1e-5);
        let worst = fd.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-6, "{worst}");
        // the stress coefficients agree with the pointwise response
        let x = ThermoelasticState::from_slice(&pts[1]).unwrap();
        let resp = c.response(&x).unwrap();
        let coef = form.eval_at(&pts[1]).unwrap();
        for k in 0..9 {
            let expect = -resp.theta_inv / 1.7 * resp.stress_term[k];
            assert!((coef[1 + k] - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn ferroelectric_potential_forms_are_closed() {
    let coords = ferroelectric::base_coords();
    let mut r = rng(6);
    let mut lo = vec![0.5];
    let mut hi = vec![1.5];
    lo.extend([0.8; 9].iter().zip(&IDENTITY).map(|(d, i)| i - 1.0 + d));
    hi.extend(IDENTITY.iter().map(|i| i + 0.2));
    lo.extend([-0.5; 15]);
    hi.extend([0.5; 15]);
    let pts = SampleBox::new(lo, hi).halton(8, 1);
    for _ in 0..2 {
        let u = format!("4*eps + {}", random_polynomial(&mut r, &coords, 16, 3, 0.5));
        let form = FerroelectricConstitutive::parse(&u, 1.2, 1.0).unwrap().entropy_form().unwrap();
        let rep = is_closed_at(&form, &pts, DEFAULT_CLOSED_TOL).unwrap();
        assert!(rep.closed, "{u}: {}", rep.max_residual);
    }
}

#[test]
fn reconstruction_recovers_potential() {
    let coords = names(&["x", "y", "z"]);
    let u = ScalarField::parse("x^2*y - exp(0.3*z)*x + y^3*z", &coords).unwrap();
    let form = OneForm::exact(&u, &coords).unwrap();
    let a = Binding::new([("x", 0.1), ("y", -0.4), ("z", 0.7)]).unwrap();
    let b = Binding::new([("x", 1.2), ("y", 0.5), ("z", -0.3)]).unwrap();
    let rec = reconstruct_potential(&form, &a, &b).unwrap();
    let du = u.value(b.values()).unwrap() - u.value(a.values()).unwrap();
    assert!((rec.value - du).abs() < 1e-12);
    assert!(rec.path_residual < 1e-12);
    let twisted = OneForm::parse(&["x", "y", "z"], &["y", "0", "0"]).unwrap();
    assert!(reconstruct_potential(&twisted, &a, &b).unwrap().path_residual > 0.1);
}

/// `Omega(X_i, X_j) = -d omega(X_i, X_j)` with
/// `d omega(X, Y) = X(omega(Y)) - Y(omega(X)) - omega([X, Y])`, all
/// derivatives by central differences on the horizontal fields.
fn curvature_oracle(c: &GibbsConnection, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let m = c.base().len();
    let field = |i: usize, y: &[f64]| c.horizontal_basis(y).unwrap().swap_remove(i);
    let omega = |y: &[f64], v: &[f64]| {
        let p: Vec<f64> = c.coefficients().iter().map(|f| f.value(y).unwrap()).collect();
        v[0] - p.iter().zip(&v[1..]).map(|(a, b)| a * b).sum::<f64>()
    };
    // derivative of g along v at x
    let along = |v: &[f64], g: &dyn Fn(&[f64]) -> Vec<f64>| -> Vec<f64> {
        let xp: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + h * b).collect();
        let xm: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - h * b).collect();
        g(&xp).iter().zip(g(&xm)).map(|(a, b)| (a - b) / (2.0 * h)).collect()
    };
    let mut out = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let (xi, xj) = (field(i, x), field(j, x));
            let x_wy = along(&xi, &|y| vec![omega(y, &field(j, y))])[0];
            let y_wx = along(&xj, &|y| vec![omega(y, &field(i, y))])[0];
            let dy: Vec<f64> = along(&xi, &|y| field(j, y));
            let dx: Vec<f64> = along(&xj, &|y| field(i, y));
            let bracket: Vec<f64> = dy.iter().zip(&dx).map(|(a, b)| a - b).collect();
            out[i][j] = -(x_wy - y_wx - omega(x, &bracket));
        }
    }
    out
}

#[test]
fn curvature_matches_bracket_oracle() {
    let base = names(&["q1", "q2", "q3"]);
    let coords = names(&["s", "q1", "q2", "q3"]);
    let mut r = rng(21);
    for _ in 0..5 {
        let p: Vec<ScalarField> = (0..3)
            .map(|_| ScalarField::parse(&random_polynomial(&mut r, &coords, 5, 3, 1.0), &coords).unwrap())
            .collect();
        let c = GibbsConnection::new("s", &base, p).unwrap();
        let x: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
        let exact = c.curvature_at(&x).unwrap();
        let oracle = curvature_oracle(&c, &x, 1e-5);
        for i in 0..3 {
            for j in 0..3 {
                assert!((exact.rows[i][j] - oracle[i][j]).abs() < 1e-6, "{} vs {}", exact.rows[i][j], oracle[i][j]);
            }
        }
    }
}

#[test]
fn legendre_lift_annihilates_contact_form() {
    let chart = ContactChart::new(3).unwrap();
    let q = chart.extensive().to_vec();
    let mut r = rng(8);
    let u = ScalarField::parse(&random_polynomial(&mut r, &q, 8, 3, 1.0), &q).unwrap();
    let l = LegendreSurface::new(chart, &u).unwrap();
    let x = [0.3, -0.2, 0.9];
    // theta applied to the pushforward of each coordinate direction, by differences
    let h = 1e-6;
    for k in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[k] += h;
        xm[k] -= h;
        let (a, b) = (l.embed_at(&xp).unwrap(), l.embed_at(&xm).unwrap());
        let ds = (a.s - b.s) / (2.0 * h);
        let p = l.embed_at(&x).unwrap().p;
        assert!((ds - p[k]).abs() < 1e-8);
    }
}

#[test]
fn entropy_change_splits_on_random_surfaces() {
    let chart = ContactChart::new(2).unwrap();
    let q = chart.extensive().to_vec();
    let mut r = rng(13);
    for _ in 0..4 {
        let u = ScalarField::parse(&random_polynomial(&mut r, &q, 6, 3, 1.0), &q).unwrap();
        let sigma = ScalarField::parse(&random_polynomial(&mut r, &q, 4, 2, 1.0), &q).unwrap();
        let s = ConstitutiveSurface::new(chart.clone(), &u, &sigma).unwrap();
        let (a, b): (f64, f64) = (r.gen_range(0.5..2.0), r.gen_range(0.5..2.0));
        let curve = ProcessCurve::sample(q.clone(), 0.0, 0.02, 51, |t| vec![(a * t).sin(), (b * t).cos() * t]).unwrap();
        let rep = admissibility(&s, &curve, AdmissibilityOptions::default()).unwrap();
        let lifted = lifted_action(&s, &curve, 8).unwrap();
        assert!((lifted.entropy - (rep.delta_u + rep.delta_sigma)).abs() < 1e-10);
        assert!((lifted.contact - rep.delta_sigma).abs() < 1e-10);
        let rev = admissibility(&s, &curve.reversed(), AdmissibilityOptions::default()).unwrap();
        let n = rep.rates.len();
        for i in 1..n - 1 {
            assert_eq!(rev.rates[n - 1 - i], -rep.rates[i]);
        }
    }
}

#[test]
fn simulated_trajectory_keeps_entropy_books() {
    let u = "ln(eps) + 0.05*F11*F22 - 0.2*(H1^2 + H2^2 + H3^2) + 0.03*F12*F21";
    let c = ThermoelasticConstitutive::parse(u, 1.4, 0.8).unwrap();
    let forcing =
        ThermoelasticForcing::parse(&["0.1", "0.05*t", "0", "0", "-0.05", "0", "0", "0.02", "0"], "0.3*t - 0.1*t^2")
            .unwrap();
    let x0 = ThermoelasticState::new(1.2, IDENTITY, [0.2, -0.1, 0.05]).unwrap();
    let (traj, err) = thermoelastic::integrate(&x0, &c, &forcing, 0.0, 0.01, 100);
    assert!(err.is_none());
    let coords = thermoelastic::base_coords();
    let curve = ProcessCurve::new(
        coords.clone(),
        traj.iter().map(|(t, _)| *t).collect(),
        traj.iter().map(|(_, x)| x.to_vec()).collect(),
    )
    .unwrap();
    let action = entropy_action(&curve, &c.entropy_form().unwrap()).unwrap();
    let du =
        c.potential().value(&traj.last().unwrap().1.to_vec()).unwrap() - c.potential().value(&x0.to_vec()).unwrap();
    assert!((action - du).abs() <= 1e-6 * du.abs().max(1e-300), "{action} vs {du}");
}

#[test]
fn thermoelastic_rk4_global_order() {
    let omega: f64 = 3.0;
    let c = ThermoelasticConstitutive::parse("ln(eps)", 1.0, 1.0).unwrap();
    let w = omega.to_string();
    let f = ThermoelasticForcing::parse(&[&w, "0", "0", "0", &w, "0", "0", "0", &w], "0").unwrap();
    let x0 = ThermoelasticState::new(1.0, IDENTITY, [0.0; 3]).unwrap();
    let err = |n: usize| {
        let (traj, _) = thermoelastic::integrate(&x0, &c, &f, 0.0, 1.0 / n as f64, n);
        (traj.last().unwrap().1.f[0] - omega.exp()).abs()
    };
    let slope = (err(20) / err(40)).log2();
    assert!((slope - 4.0).abs() < 0.6, "{slope}");
}
