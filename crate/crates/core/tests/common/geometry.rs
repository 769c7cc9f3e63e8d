//! Geometry measurements shared by the geometry tests and the acceptance
//! harness. Each check returns `(label, measured, tolerance)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use sobolev_hf::grassmann::{
    grassmann_gradient, grassmann_transport, horizontal_project, horizontal_project_with,
    horizontality_defect, solve_skew_sylvester,
};
use sobolev_hf::hartree_fock::{euclidean_gradient, potential_action};
use sobolev_hf::linalg::{random_orthogonal, skew_part, symmetric_part, SmallMatrix};
use sobolev_hf::stiefel::{
    assemble_gradient, lowdin_retract, project_tangent, riemannian_gradient, tangency_defect,
    transport, Frame,
};
use sobolev_hf::{OrbitalVector, Space};

use super::{h2be_point, random_vector, rel, rng};

pub type Check = (&'static str, f64, f64);

fn random_matrix(n: usize, seed: u64) -> SmallMatrix {
    let mut r = rng(seed);
    DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0))
}

fn random_spd(n: usize, seed: u64) -> SmallMatrix {
    let x = random_matrix(n, seed);
    &x * x.transpose() + SmallMatrix::identity(n, n) * 0.1
}

/// Dense solve of `XB + BX = M` over all `n²` unknowns.
fn kronecker_solve(b: &SmallMatrix, m: &SmallMatrix) -> SmallMatrix {
    let n = b.nrows();
    let id = SmallMatrix::identity(n, n);
    let op = b.transpose().kronecker(&id) + id.kronecker(b);
    let rhs = DVector::from_column_slice(m.as_slice());
    let x = op
        .lu()
        .solve(&rhs)
        .expect("Sylvester operator is nonsingular");
    DMatrix::from_column_slice(n, n, x.as_slice())
}

pub fn sylvester(seed: u64) -> Vec<Check> {
    let n = 5;
    let b = random_spd(n, seed);
    let m = symmetric_part(&random_matrix(n, seed + 1));
    let a = sobolev_hf::stiefel::solve_sym_sylvester(&b, &m).unwrap();
    let k = skew_part(&random_matrix(n, seed + 2));
    let w = solve_skew_sylvester(&b, &k).unwrap();
    vec![
        (
            "symmetric Sylvester residual",
            (&a * &b + &b * &a - &m).norm() / m.norm(),
            1e-12,
        ),
        (
            "symmetric Sylvester vs Kronecker solve",
            (&a - kronecker_solve(&b, &m)).norm() / a.norm(),
            1e-12,
        ),
        (
            "skew Sylvester residual",
            (&w * &b + &b * &w - &k).norm() / k.norm(),
            1e-12,
        ),
        (
            "skew Sylvester vs Kronecker solve",
            (&w - kronecker_solve(&b, &k)).norm() / w.norm(),
            1e-12,
        ),
    ]
}

fn max_rel_distance(a: &OrbitalVector, b: &OrbitalVector) -> f64 {
    a.lincomb(1.0, -1.0, b).unwrap().h1_norm() / b.h1_norm().max(f64::MIN_POSITIVE)
}

pub fn stiefel(n: usize, seed: u64) -> Vec<Check> {
    let (problem, phi) = h2be_point(16, 12.0, n, seed);
    let grid = phi.grid().clone();
    let frame = Frame::new(&phi).unwrap();
    let mut r = rng(seed + 100);
    let u = random_vector(&grid, n, &mut r);
    let w = random_vector(&grid, n, &mut r);
    let pu = project_tangent(&frame, &u).unwrap().0.direction;
    let pw = project_tangent(&frame, &w).unwrap().0.direction;
    let ppu = project_tangent(&frame, &pu).unwrap().0.direction;
    let lhs = pu.inner(&w, Space::H1).unwrap();
    let rhs = u.inner(&pw, Space::H1).unwrap();

    let (grad, a) = riemannian_gradient(&phi, &problem).unwrap();
    let action = potential_action(&phi, &problem).unwrap();
    let assembled = assemble_gradient(&frame, &a, &action).unwrap();

    let step = lowdin_retract(&phi, &pu.scaled(0.3 / pu.h1_norm())).unwrap();
    let same = transport(&frame, &pu).unwrap().direction;
    let moved = transport(&Frame::new(&step).unwrap(), &pu)
        .unwrap()
        .direction;
    let combo = transport(
        &Frame::new(&step).unwrap(),
        &pu.lincomb(0.7, -1.3, &pw).unwrap(),
    )
    .unwrap()
    .direction;
    let combo_split = moved
        .lincomb(
            0.7,
            -1.3,
            &transport(&Frame::new(&step).unwrap(), &pw)
                .unwrap()
                .direction,
        )
        .unwrap();

    let scale = u.l2_norm() * phi.l2_norm();
    vec![
        (
            "projection tangency",
            tangency_defect(&phi, &pu).unwrap() / scale,
            1e-10,
        ),
        ("projection idempotence", max_rel_distance(&ppu, &pu), 1e-10),
        (
            "projection H1 self-adjointness",
            rel(lhs, rhs) * rhs.abs() / (u.h1_norm() * w.h1_norm()),
            1e-10,
        ),
        (
            "gradient assembly vs projection",
            max_rel_distance(&assembled, &grad.direction),
            1e-10,
        ),
        ("Loewdin Gram defect", step.orthonormality_defect(), 1e-11),
        ("transport identity", max_rel_distance(&same, &pu), 1e-11),
        (
            "transport tangency",
            tangency_defect(&step, &moved).unwrap() / (pu.l2_norm() * step.l2_norm()),
            1e-10,
        ),
        (
            "transport linearity",
            max_rel_distance(&combo, &combo_split),
            1e-11,
        ),
    ]
}

pub fn grassmann(n: usize, seed: u64) -> Vec<Check> {
    let (problem, phi) = h2be_point(16, 12.0, n, seed);
    let grid = phi.grid().clone();
    let frame = Frame::new(&phi).unwrap();
    let mut r = rng(seed + 200);
    let q = random_orthogonal(n, &mut r);
    let u = project_tangent(&frame, &random_vector(&grid, n, &mut r))
        .unwrap()
        .0
        .direction;
    let w = project_tangent(&frame, &random_vector(&grid, n, &mut r))
        .unwrap()
        .0
        .direction;
    let (hu, _) = horizontal_project_with(&frame, &u).unwrap();
    let hu = hu.direction;
    let hw = horizontal_project(&frame, &w).unwrap().direction;
    let hhu = horizontal_project(&frame, &hu).unwrap().direction;
    let omega = skew_part(&random_matrix(n, seed + 3));
    let vertical = phi.rotate(&omega).unwrap();
    let vertical_left = horizontal_project(&frame, &vertical).unwrap().direction;

    let (stiefel_grad, _) = riemannian_gradient(&phi, &problem).unwrap();
    let (grass_grad, _) = grassmann_gradient(&phi, &problem).unwrap();
    let removed = stiefel_grad
        .direction
        .lincomb(1.0, -1.0, &grass_grad.direction)
        .unwrap()
        .h1_norm();
    let euclid = euclidean_gradient(&phi, &problem).unwrap();
    let slope_s = euclid.inner(&stiefel_grad.direction, Space::H1).unwrap();
    let slope_g = euclid.inner(&grass_grad.direction, Space::H1).unwrap();

    // representatives: Qφ carries the lift Q·h
    let qphi = phi.rotate(&q).unwrap();
    let qframe = Frame::new(&qphi).unwrap();
    let qhu = hu.rotate(&q).unwrap();
    let qhw = hw.rotate(&q).unwrap();
    let retract_defect = max_rel_distance(
        &lowdin_retract(&qphi, &qhu).unwrap(),
        &lowdin_retract(&phi, &hu).unwrap().rotate(&q).unwrap(),
    );
    let lift_defect = max_rel_distance(&horizontal_project(&qframe, &qhu).unwrap().direction, &qhu);
    let metric_phi = hu.inner(&hw, Space::H1).unwrap();
    let metric_qphi = qhu.inner(&qhw, Space::H1).unwrap();

    let target = lowdin_retract(&phi, &hu.scaled(0.3 / hu.h1_norm())).unwrap();
    let qtarget = target.rotate(&q).unwrap();
    let moved = grassmann_transport(&Frame::new(&target).unwrap(), &hu)
        .unwrap()
        .direction;
    let moved_q = grassmann_transport(&Frame::new(&qtarget).unwrap(), &qhu)
        .unwrap()
        .direction;
    let identity = grassmann_transport(&frame, &hu).unwrap().direction;

    vec![
        (
            "horizontal tangency",
            tangency_defect(&phi, &hu).unwrap() / (u.l2_norm() * phi.l2_norm()),
            1e-10,
        ),
        (
            "horizontal Psi-symmetry",
            horizontality_defect(&frame, &hu).unwrap(),
            1e-10,
        ),
        ("horizontal idempotence", max_rel_distance(&hhu, &hu), 1e-10),
        (
            "vertical vector removed",
            vertical_left.h1_norm() / vertical.h1_norm(),
            1e-10,
        ),
        (
            "Stiefel gradient Psi-symmetry",
            horizontality_defect(&frame, &stiefel_grad.direction).unwrap(),
            1e-6,
        ),
        (
            "Grassmann gradient vertical part",
            removed / stiefel_grad.h1_norm(),
            1e-6,
        ),
        (
            "Grassmann vs Stiefel gradient slope",
            rel(slope_g, slope_s),
            1e-8,
        ),
        (
            "retraction representative-equivariance",
            retract_defect,
            1e-10,
        ),
        ("lift equivariance", lift_defect, 1e-10),
        (
            "quotient metric well-defined",
            (metric_phi - metric_qphi).abs() / (hu.h1_norm() * hw.h1_norm()),
            1e-10,
        ),
        (
            "Grassmann transport identity",
            max_rel_distance(&identity, &hu),
            1e-10,
        ),
        (
            "Grassmann transport equivariance",
            max_rel_distance(&moved_q, &moved.rotate(&q).unwrap()),
            1e-9,
        ),
    ]
}
