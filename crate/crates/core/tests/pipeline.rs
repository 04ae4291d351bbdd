use veronese_core::expr::parse_field;
use veronese_core::nijenhuis::NormalFormTag;
use veronese_core::sampling::Box3;
use veronese_core::solutions::exact_solution;
use veronese_core::webs::{
    lax_closure_residual, nondegeneracy_det, pde_residual, EquationSpec, LAMBDA_GRID,
};
use veronese_core::ScalarField;

#[test]
fn parsed_cross_ratio_solves_the_a_family() {
    let spec = EquationSpec::A {
        lambda: [0, 1, 2].map(ScalarField::coordinate),
    };
    let f = parse_field("(x3 - x2)/(x1 - x2)").unwrap();
    let bad = parse_field("x1*x2 + x3").unwrap();
    let points = Box3::new([2.5, 1.5, 0.5], [3.5, 2.5, 1.5])
        .unwrap()
        .random_points(3, 30, |p| p[0] - p[1] > 0.4 && p[1] - p[2] > 0.4)
        .unwrap();
    for p in points {
        assert!(pde_residual(&spec, &f, p).unwrap().abs() < 1e-12);
        assert!(nondegeneracy_det(&spec, &f, p).unwrap().abs() > 1e-8);
        for l in LAMBDA_GRID {
            let r = lax_closure_residual(&spec, &f, p, l).unwrap();
            assert!(r.abs() < 1e-9, "{p:?} {l}: {r}");
        }
        assert!(pde_residual(&spec, &bad, p).unwrap().abs() > 1e-3);
    }
}

#[test]
fn library_cases_solve_their_equations_on_a_grid() {
    for tag in [
        NormalFormTag::A0,
        NormalFormTag::A1,
        NormalFormTag::B0,
        NormalFormTag::C0,
        NormalFormTag::D0,
    ] {
        let case = exact_solution(tag).unwrap();
        for p in case.sample_box.grid(3) {
            let Ok(q) = case.chart_point(p) else { continue };
            let r = pde_residual(&case.spec, &case.solution, q).unwrap();
            assert!(r.abs() < 1e-9, "{tag:?} at {p:?}: {r}");
        }
    }
}
