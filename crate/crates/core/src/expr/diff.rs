use super::{BinOp, Expr, Func};

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::Binary(op, Box::new(a), Box::new(b))
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
        _ if is_num(&a, 0.0) => b,
        _ if is_num(&b, 0.0) => a,
        _ => bin(BinOp::Add, a, b),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
        _ if is_num(&b, 0.0) => a,
        _ if is_num(&a, 0.0) => neg(b),
        _ => bin(BinOp::Sub, a, b),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
        _ if is_num(&a, 0.0) || is_num(&b, 0.0) => Expr::Num(0.0),
        _ if is_num(&a, 1.0) => b,
        _ if is_num(&b, 1.0) => a,
        _ => bin(BinOp::Mul, a, b),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_num(&a, 0.0) => Expr::Num(0.0),
        _ if is_num(&b, 1.0) => a,
        _ => bin(BinOp::Div, a, b),
    }
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => Expr::Num(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn is_const(e: &Expr) -> bool {
    e.variables().is_empty()
}

/// d(base^exponent); a constant exponent keeps the power-rule shape so that
/// integer exponents stay valid for negative bases.
fn power_derivative(base: &Expr, exponent: &Expr, name: &str, original: &Expr) -> Expr {
    let db = derivative(base, name);
    if is_const(exponent) {
        let lowered = sub(exponent.clone(), Expr::Num(1.0));
        let p = if is_num(&lowered, 1.0) {
            base.clone()
        } else if is_num(&lowered, 0.0) {
            Expr::Num(1.0)
        } else {
            bin(BinOp::Pow, base.clone(), lowered)
        };
        return mul(mul(exponent.clone(), p), db);
    }
    let de = derivative(exponent, name);
    let ln_base = Expr::Call(Func::Ln, vec![base.clone()]);
    let inner = add(mul(de, ln_base), div(mul(exponent.clone(), db), base.clone()));
    mul(original.clone(), inner)
}

pub(super) fn derivative(e: &Expr, name: &str) -> Expr {
    if !e.depends_on(name) {
        return Expr::Num(0.0);
    }
    match e {
        Expr::Num(_) => Expr::Num(0.0),
        Expr::Var(n) => Expr::Num(if n == name { 1.0 } else { 0.0 }),
        Expr::Neg(a) => neg(derivative(a, name)),
        Expr::Binary(op, a, b) => match op {
            BinOp::Add => add(derivative(a, name), derivative(b, name)),
            BinOp::Sub => sub(derivative(a, name), derivative(b, name)),
            BinOp::Mul => add(mul(derivative(a, name), (**b).clone()), mul((**a).clone(), derivative(b, name))),
            BinOp::Div => {
                let da = derivative(a, name);
                let db = derivative(b, name);
                sub(div(da, (**b).clone()), div(mul((**a).clone(), db), mul((**b).clone(), (**b).clone())))
            }
            BinOp::Pow => power_derivative(a, b, name, e),
        },
        Expr::Call(f, args) => {
            let a = &args[0];
            let da = derivative(a, name);
            match f {
                Func::Exp => mul(e.clone(), da),
                Func::Ln => div(da, a.clone()),
                Func::Sqrt => div(da, mul(Expr::Num(2.0), e.clone())),
                Func::Abs => mul(da, div(a.clone(), e.clone())),
                Func::Pow => power_derivative(a, &args[1], name, e),
            }
        }
    }
}
