//! Built-in systems, transcribed from their published coordinate formulas.
//!
//! | name         | growth        | realization                          |
//! |--------------|---------------|--------------------------------------|
//! | `heis3`      | (2,3)         | all omegas, thetas                   |
//! | `engel`      | (2,3,4)       | all omegas, thetas                   |
//! | `cartan5`    | (2,3,5)       | omega_1, omega_2, thetas             |
//! | `ell6`       | (2,3,5,6)     | omega_1, omega_2, theta_3..6 = p     |
//! | `par6`       | (2,3,5,6)     | omega_1, omega_2, theta_3..6 = p     |
//! | `hyp6`       | (2,3,5,6)     | omega_1, omega_2, theta_3..6 = p     |
//! | `gen6`       | (2,3,5,6)     | elliptic, `2H = w1^2 + (a w1 + b w2)^2` |
//! | `gen6h`      | (2,3,5,6)     | hyperbolic, same metric family       |
//! | `dim7`       | (2,3,5,7)     | omega_1, omega_2, theta_3..7 = p     |
//! | `dim8_23568` | (2,3,5,6,8)   | all omegas, theta_4..8 = p           |
//! | `dim8_2358`  | (2,3,5,8)     | omega_1, omega_2, theta_3..8 = p     |

use num_traits::Zero;

use super::{CarnotAlgebra, CarnotError, CoordinateRealization, SRSystem};
use crate::exactpoly::{parse_polynomial, PhasePolynomial, Rational};

pub const CATALOG_NAMES: &[&str] = &[
    "heis3",
    "engel",
    "cartan5",
    "ell6",
    "par6",
    "hyp6",
    "gen6",
    "gen6h",
    "dim7",
    "dim8_23568",
    "dim8_2358",
];

/// Metric parameters `(a, b)` of the general 6D family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogParams {
    pub a: Rational,
    pub b: Rational,
}

const CARTAN: [(usize, usize, usize, i64); 3] = [(1, 2, 3, 1), (1, 3, 4, 1), (2, 3, 5, 1)];

fn poly(d: usize, s: &str) -> PhasePolynomial {
    parse_polynomial(s, d, d).expect("catalog formula parses")
}

fn brackets(extra: &[(usize, usize, usize, i64)]) -> Vec<(usize, usize, usize, i64)> {
    CARTAN.iter().chain(extra).copied().collect()
}

fn realization(
    d: usize,
    omegas: &[(usize, &str)],
    thetas: &[(usize, &str)],
    sign: i32,
) -> CoordinateRealization {
    let mut ws = vec![None; d];
    for (i, s) in omegas {
        ws[i - 1] = Some(poly(d, s));
    }
    let mut ts = vec![None; d];
    for (i, s) in thetas {
        ts[i - 1] = Some(poly(d, s));
    }
    CoordinateRealization {
        omegas: ws,
        thetas: ts,
        sign: Some(sign),
    }
}

fn noether_thetas(from: usize, d: usize) -> Vec<(usize, String)> {
    (from..=d).map(|i| (i, format!("p{i}"))).collect()
}

fn two_square_system(
    algebra: CarnotAlgebra,
    u: PhasePolynomial,
    v: PhasePolynomial,
    realization: CoordinateRealization,
) -> SRSystem {
    let h2 = &(&u * &u) + &(&v * &v);
    SRSystem {
        name: algebra.name.clone(),
        algebra,
        hamiltonian2: h2,
        frame: Some((u, v)),
        realization: Some(realization),
    }
}

/// Standard system `2H = omega_1^2 + omega_2^2` from transcribed forms.
fn standard(
    name: &str,
    grading: &[usize],
    extra: &[(usize, usize, usize, i64)],
    w1: &str,
    w2: &str,
    theta_from: usize,
    sign: i32,
) -> SRSystem {
    let d: usize = grading.iter().sum();
    let alg = CarnotAlgebra::from_int_brackets(name, grading, &brackets(extra))
        .expect("catalog algebra is well formed");
    let thetas = noether_thetas(theta_from, d);
    let th: Vec<(usize, &str)> = thetas.iter().map(|(i, s)| (*i, s.as_str())).collect();
    let real = realization(d, &[(1, w1), (2, w2)], &th, sign);
    two_square_system(alg, poly(d, w1), poly(d, w2), real)
}

const ELL6_W1: &str = "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6";
const ELL6_W2: &str = "p2 + 1/2 x1 p3 + x1 x2 p5 + 1/2 x1 x2^2 p6";
const HYP6_W1: &str = "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/4 x1 x2^2 p6";
const HYP6_W2: &str = "p2 + 1/2 x1 p3 + x1 x2 p5 + 1/4 x1^2 x2 p6";
const ELL6_EXTRA: [(usize, usize, usize, i64); 2] = [(1, 4, 6, 1), (2, 5, 6, 1)];
const HYP6_EXTRA: [(usize, usize, usize, i64); 2] = [(1, 5, 6, 1), (2, 4, 6, 1)];

fn general6(name: &str, params: &CatalogParams, hyperbolic: bool) -> Result<SRSystem, CarnotError> {
    if params.b.is_zero() {
        return Err(CarnotError::Parameter(format!("{name} requires b != 0")));
    }
    let (w1s, w2s, extra) = if hyperbolic {
        (HYP6_W1, HYP6_W2, HYP6_EXTRA)
    } else {
        (ELL6_W1, ELL6_W2, ELL6_EXTRA)
    };
    let alg = CarnotAlgebra::from_int_brackets(name, &[2, 1, 2, 1], &brackets(&extra))
        .expect("catalog algebra is well formed");
    let thetas = noether_thetas(3, 6);
    let th: Vec<(usize, &str)> = thetas.iter().map(|(i, s)| (*i, s.as_str())).collect();
    let real = realization(6, &[(1, w1s), (2, w2s)], &th, -1);
    let w1 = poly(6, w1s);
    let w2 = poly(6, w2s);
    let v = &w1.scale(&params.a) + &w2.scale(&params.b);
    Ok(two_square_system(alg, w1, v, real))
}

/// Looks up a built-in system. `gen6`/`gen6h` require `params` with `b != 0`;
/// the other systems take none.
pub fn lookup(name: &str, params: Option<&CatalogParams>) -> Result<SRSystem, CarnotError> {
    let needs_params = matches!(name, "gen6" | "gen6h");
    if !CATALOG_NAMES.contains(&name) {
        return Err(CarnotError::UnknownSystem(name.to_string()));
    }
    match (needs_params, params) {
        (true, None) => {
            return Err(CarnotError::Parameter(format!(
                "{name} needs parameters a, b"
            )))
        }
        (false, Some(_)) => {
            return Err(CarnotError::Parameter(format!(
                "{name} takes no parameters"
            )))
        }
        _ => {}
    }
    let sys = match name {
        "heis3" => {
            let alg = CarnotAlgebra::from_int_brackets("heis3", &[2, 1], &[(1, 2, 3, 1)])
                .expect("well formed");
            let real = realization(
                3,
                &[(1, "p1 + x2 p3"), (2, "p2"), (3, "p3")],
                &[(1, "p1"), (2, "p2 + x1 p3"), (3, "p3")],
                1,
            );
            two_square_system(alg, poly(3, "p1 + x2 p3"), poly(3, "p2"), real)
        }
        "engel" => {
            let alg = CarnotAlgebra::from_int_brackets(
                "engel",
                &[2, 1, 1],
                &[(1, 2, 3, 1), (1, 3, 4, 1)],
            )
            .expect("well formed");
            let w1 = "p1 + x2 p3 + x3 p4";
            let real = realization(
                4,
                &[(1, w1), (2, "p2"), (3, "p3"), (4, "p4")],
                &[
                    (1, "-p1"),
                    (2, "p2 + x1 p3 + 1/2 x1^2 p4"),
                    (3, "p3 + x1 p4"),
                    (4, "p4"),
                ],
                1,
            );
            two_square_system(alg, poly(4, w1), poly(4, "p2"), real)
        }
        "cartan5" => {
            let w1 = "p1 - 1/2 x2 p3 - x1 x2 p4";
            let w2 = "p2 + 1/2 x1 p3 + x1 x2 p5";
            let alg = CarnotAlgebra::from_int_brackets("cartan5", &[2, 1, 2], &CARTAN)
                .expect("well formed");
            let real = realization(
                5,
                &[(1, w1), (2, w2)],
                &[
                    (1, "p1 + 1/2 x2 p3 + x3 p4 - 1/2 x1 x2 p4 + 1/2 x2^2 p5"),
                    (2, "p2 - 1/2 x1 p3 - 1/2 x1^2 p4 + x3 p5 + 1/2 x1 x2 p5"),
                    (3, "p3"),
                    (4, "p4"),
                    (5, "p5"),
                ],
                -1,
            );
            two_square_system(alg, poly(5, w1), poly(5, w2), real)
        }
        "ell6" => standard("ell6", &[2, 1, 2, 1], &ELL6_EXTRA, ELL6_W1, ELL6_W2, 3, -1),
        "par6" => standard(
            "par6",
            &[2, 1, 2, 1],
            &[(1, 4, 6, 1)],
            "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6",
            "p2 + 1/2 x1 p3 + x1 x2 p5",
            3,
            -1,
        ),
        "hyp6" => standard("hyp6", &[2, 1, 2, 1], &HYP6_EXTRA, HYP6_W1, HYP6_W2, 3, -1),
        "gen6" => general6("gen6", params.expect("checked"), false)?,
        "gen6h" => general6("gen6h", params.expect("checked"), true)?,
        "dim7" => standard(
            "dim7",
            &[2, 1, 2, 2],
            &[(1, 4, 6, 1), (2, 5, 6, -1), (1, 5, 7, 1), (2, 4, 7, 1)],
            "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6 - 1/4 x1 x2^2 p7",
            "p2 + 1/2 x1 p3 + x1 x2 p5 - 1/2 x1 x2^2 p6 + 1/4 x1^2 x2 p7",
            3,
            -1,
        ),
        "dim8_2358" => standard(
            "dim8_2358",
            &[2, 1, 2, 3],
            &[(1, 4, 6, 1), (1, 5, 7, 1), (2, 4, 7, 1), (2, 5, 8, 1)],
            "p1 - 1/2 x2 p3 - 1/2 x1^2 p5 - 1/2 x2^2 p5 - 1/4 x1 x2^2 p7 - 1/6 x2^3 p8",
            "p2 + 1/2 x1 p3 + 1/2 x1^2 p4 + 1/2 x2^2 p4 + 1/6 x1^3 p6 + 1/4 x1^2 x2 p7",
            3,
            -1,
        ),
        "dim8_23568" => dim8_23568(),
        _ => unreachable!("name checked against CATALOG_NAMES"),
    };
    Ok(sys)
}

/// The (2,3,5,6,8) structure; complex relations `[e_{1,2}, e_3] = e_{4,5}`,
/// `[e_{1,2}, e_6] = e_{7,8}`, `[e_3, e_{4,5}] = i e_{7,8}` written out in
/// real form.
fn dim8_23568() -> SRSystem {
    let alg = CarnotAlgebra::from_int_brackets(
        "dim8_23568",
        &[2, 1, 2, 1, 2],
        &brackets(&[
            (1, 4, 6, 1),
            (2, 5, 6, 1),
            (1, 6, 7, 1),
            (2, 6, 8, 1),
            (3, 4, 8, -1),
            (3, 5, 7, 1),
        ]),
    )
    .expect("well formed");
    // sigma^2 = x1^2 + x2^2 expanded
    let w1 = "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6 - 1/5 x1^2 x3 p7 - 2/5 x2^2 x3 p7 \
              + 1/5 x1 x2 x3 p8";
    let w2 = "p2 + 1/2 x1 p3 + x1 x2 p5 + 1/2 x1 x2^2 p6 + 1/5 x1 x2 x3 p7 - 2/5 x1^2 x3 p8 \
              - 1/5 x2^2 x3 p8";
    let w3 = "p3 + x1 p4 + x2 p5 + 1/2 x1^2 p6 + 1/2 x2^2 p6 + 1/10 x1^3 p7 + 1/10 x1 x2^2 p7 \
              + x2 x3 p7 + 1/10 x1^2 x2 p8 + 1/10 x2^3 p8 - x1 x3 p8";
    let w4 = "p4 + x1 p6 + 1/2 x1^2 p7 + 1/2 x1 x2 p8 - x3 p8";
    let w5 = "p5 + x2 p6 + 1/2 x1 x2 p7 + x3 p7 + 1/2 x2^2 p8";
    let w6 = "p6 + x1 p7 + x2 p8";
    let real = realization(
        8,
        &[
            (1, w1),
            (2, w2),
            (3, w3),
            (4, w4),
            (5, w5),
            (6, w6),
            (7, "p7"),
            (8, "p8"),
        ],
        &[(4, "p4"), (5, "p5"), (6, "p6"), (7, "p7"), (8, "p8")],
        -1,
    );
    two_square_system(alg, poly(8, w1), poly(8, w2), real)
}
