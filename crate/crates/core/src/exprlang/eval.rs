use super::ast::{BinaryOp, Expression, UnaryOp};
use super::jet::Jet2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{reason} in `{subexpr}`")]
    Domain { reason: String, subexpr: String },
    #[error("point has {got} coordinates, expression needs at least {need}")]
    Dimension { need: usize, got: usize },
}

fn domain(reason: &str, e: &Expression) -> EvalError {
    EvalError::Domain {
        reason: reason.to_string(),
        subexpr: e.to_string(),
    }
}

fn check_dim(e: &Expression, point: &[f64]) -> Result<(), EvalError> {
    match e.max_var_index() {
        Some(i) if i >= point.len() => Err(EvalError::Dimension {
            need: i + 1,
            got: point.len(),
        }),
        _ => Ok(()),
    }
}

/// Plain value of `e` at `point`.
pub fn eval(e: &Expression, point: &[f64]) -> Result<f64, EvalError> {
    check_dim(e, point)?;
    eval_value(e, point)
}

fn eval_value(e: &Expression, point: &[f64]) -> Result<f64, EvalError> {
    let v = match e {
        Expression::Num(v) => *v,
        Expression::Var { index, .. } => point[*index],
        Expression::Unary(op, a) => {
            let u = eval_value(a, point)?;
            match op {
                UnaryOp::Neg => -u,
                UnaryOp::Sin => u.sin(),
                UnaryOp::Cos => u.cos(),
                UnaryOp::Tan => u.tan(),
                UnaryOp::Exp => u.exp(),
                UnaryOp::Log if u <= 0.0 => return Err(domain("log of non-positive value", e)),
                UnaryOp::Log => u.ln(),
                UnaryOp::Sqrt if u < 0.0 => return Err(domain("sqrt of negative value", e)),
                UnaryOp::Sqrt => u.sqrt(),
                UnaryOp::Sinh => u.sinh(),
                UnaryOp::Cosh => u.cosh(),
            }
        }
        Expression::Binary(op, a, b) => {
            let (x, y) = (eval_value(a, point)?, eval_value(b, point)?);
            match op {
                BinaryOp::Add => x + y,
                BinaryOp::Sub => x - y,
                BinaryOp::Mul => x * y,
                BinaryOp::Div if y == 0.0 => return Err(domain("division by zero", e)),
                BinaryOp::Div => x / y,
            }
        }
        Expression::Pow(a, p) => {
            let u = eval_value(a, point)?;
            check_pow(u, *p, e, false)?;
            if p.fract() == 0.0 {
                u.powi(*p as i32)
            } else {
                u.powf(*p)
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(domain("non-finite result", e))
    }
}

fn check_pow(u: f64, p: f64, e: &Expression, need_second: bool) -> Result<(), EvalError> {
    let integer = p.fract() == 0.0;
    if u < 0.0 && !integer {
        return Err(domain("fractional power of negative value", e));
    }
    if u == 0.0 {
        if p < 0.0 {
            return Err(domain("division by zero", e));
        }
        if !integer && need_second && p < 2.0 {
            return Err(domain("power not differentiable at zero", e));
        }
    }
    Ok(())
}

/// Value, gradient and Hessian of `e` at `point`, by second-order forward
/// propagation. The gradient has one entry per coordinate of `point`.
pub fn eval_jet2(e: &Expression, point: &[f64]) -> Result<Jet2, EvalError> {
    check_dim(e, point)?;
    jet(e, point)
}

fn jet(e: &Expression, point: &[f64]) -> Result<Jet2, EvalError> {
    let n = point.len();
    let out = match e {
        Expression::Num(v) => Jet2::constant(n, *v),
        Expression::Var { index, .. } => Jet2::variable(n, *index, point[*index]),
        Expression::Unary(op, a) => {
            let u = jet(a, point)?;
            match op {
                UnaryOp::Neg => -&u,
                UnaryOp::Sin => u.sin(),
                UnaryOp::Cos => u.cos(),
                UnaryOp::Tan => u.tan(),
                UnaryOp::Exp => u.exp(),
                UnaryOp::Log if u.value() <= 0.0 => {
                    return Err(domain("log of non-positive value", e))
                }
                UnaryOp::Log => u.ln(),
                UnaryOp::Sqrt if u.value() < 0.0 => {
                    return Err(domain("sqrt of negative value", e))
                }
                UnaryOp::Sqrt if u.value() == 0.0 => {
                    return Err(domain("sqrt not differentiable at zero", e))
                }
                UnaryOp::Sqrt => u.sqrt(),
                UnaryOp::Sinh => u.sinh(),
                UnaryOp::Cosh => u.cosh(),
            }
        }
        Expression::Binary(op, a, b) => {
            let (x, y) = (jet(a, point)?, jet(b, point)?);
            match op {
                BinaryOp::Add => &x + &y,
                BinaryOp::Sub => &x - &y,
                BinaryOp::Mul => &x * &y,
                BinaryOp::Div if y.value() == 0.0 => return Err(domain("division by zero", e)),
                BinaryOp::Div => &x / &y,
            }
        }
        Expression::Pow(a, p) => {
            let u = jet(a, point)?;
            check_pow(u.value(), *p, e, true)?;
            u.powf(*p)
        }
    };
    if out.is_finite() {
        Ok(out)
    } else {
        Err(domain("non-finite result", e))
    }
}
