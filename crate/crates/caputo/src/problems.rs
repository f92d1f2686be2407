//! Built-in benchmark problems with known exact solutions.

use crate::error::{Error, Result};
use crate::solver::Problem;
use crate::special::{gamma_unchecked, mittag_leffler};
use crate::weights::Order;

/// Eigenvalue used by the `example3*` entries.
pub const EXAMPLE3_LAMBDA: f64 = -1.0;

/// Registry entry: an id, a blurb, and a constructor parameterized by order.
pub struct ProblemSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub default_t: f64,
    make: fn(Order) -> Result<Problem>,
}

impl ProblemSpec {
    pub fn build(&self, order: Order) -> Result<Problem> {
        (self.make)(order)
    }
}

fn example1(order: Order) -> Result<Problem> {
    let nu = order.nu();
    let c = gamma_unchecked(4.0 + nu) / 6.0;
    Ok(Problem::new(order, 0.0, move |x, _| c * x.powi(3))
        .with_jacobian(|_, _| 0.0)
        .with_exact(move |x| x.powf(3.0 + nu)))
}

fn example2_linear(order: Order) -> Result<Problem> {
    let nu = order.nu();
    let c = gamma_unchecked(4.0 + nu) / 6.0;
    Ok(
        Problem::new(order, 0.0, move |x, y| c * x.powi(3) + x.powf(3.0 + nu) - y)
            .with_jacobian(|_, _| -1.0)
            .with_exact(move |x| x.powf(3.0 + nu))
            .with_lipschitz_hint(1.0),
    )
}

fn example2_nonlinear(order: Order) -> Result<Problem> {
    let nu = order.nu();
    let c = gamma_unchecked(4.0 + nu) / 6.0;
    Ok(Problem::new(order, 0.0, move |x, y| {
        c * x.powi(3) + x.powf(6.0 + 2.0 * nu) - y * y
    })
    .with_jacobian(|_, y| -2.0 * y)
    .with_exact(move |x| x.powf(3.0 + nu)))
}

fn example3(order: Order) -> Result<Problem> {
    let nu = order.nu();
    Ok(Problem::new(order, 1.0, |_, y| EXAMPLE3_LAMBDA * y)
        .with_jacobian(|_, _| EXAMPLE3_LAMBDA)
        .with_exact(move |x| mittag_leffler(nu, EXAMPLE3_LAMBDA * x.powf(nu)).unwrap_or(f64::NAN))
        .with_lipschitz_hint(EXAMPLE3_LAMBDA.abs()))
}

fn example3_nu1(order: Order) -> Result<Problem> {
    if (order.nu() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidConfig(
            "example3-nu1 uses the exponential solution and requires nu = 1".into(),
        ));
    }
    Ok(Problem::new(order, 1.0, |_, y| EXAMPLE3_LAMBDA * y)
        .with_jacobian(|_, _| EXAMPLE3_LAMBDA)
        .with_exact(|x| (EXAMPLE3_LAMBDA * x).exp())
        .with_lipschitz_hint(EXAMPLE3_LAMBDA.abs()))
}

/// All built-in problems.
pub fn registry() -> Vec<ProblemSpec> {
    vec![
        ProblemSpec {
            id: "example1",
            description: "D^nu y = Gamma(4+nu)/6 x^3 (rhs independent of y), exact x^(3+nu)",
            default_t: 1.0,
            make: example1,
        },
        ProblemSpec {
            id: "example2-linear",
            description: "rhs with linear y-coupling, exact x^(3+nu)",
            default_t: 1.0,
            make: example2_linear,
        },
        ProblemSpec {
            id: "example2-nonlinear",
            description: "rhs with quadratic y-coupling, exact x^(3+nu)",
            default_t: 1.0,
            make: example2_nonlinear,
        },
        ProblemSpec {
            id: "example3",
            description: "eigenproblem D^nu y = -y, exact E_nu(-x^nu)",
            default_t: 1.0,
            make: example3,
        },
        ProblemSpec {
            id: "example3-nu1",
            description: "eigenproblem at nu = 1, exact e^(-x)",
            default_t: 1.0,
            make: example3_nu1,
        },
    ]
}

/// Builds a registry problem by id.
pub fn make_problem(id: &str, order: Order) -> Result<Problem> {
    registry()
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownProblem(id.to_string()))?
        .build(order)
}
