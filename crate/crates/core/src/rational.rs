//! Exact rational scalars. All actions, critical values and the level `tau`
//! are `Ratio<i64>`; nothing in the engine touches floating point.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

pub type Rational = Ratio<i64>;

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: i64 = num
        .parse()
        .map_err(|_| format!("invalid rational numerator in `{s}`"))?;
    let q: i64 = den
        .parse()
        .map_err(|_| format!("invalid rational denominator in `{s}`"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Ratio::new(p, q))
}

pub fn int(n: i64) -> Rational {
    Ratio::from_integer(n)
}

/// Smallest integer `k` with `k >= x`.
pub fn ceil_int(x: Rational) -> i64 {
    Integer::div_ceil(x.numer(), x.denom())
}

/// Largest integer `k` with `k <= x`.
pub fn floor_int(x: Rational) -> i64 {
    Integer::div_floor(x.numer(), x.denom())
}
