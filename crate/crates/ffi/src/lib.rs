//! C ABI over `rsekit`. Every call returns an `RsekitStatus`; on failure the
//! message is available from `rsekit_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rsekit::approx::{gap_approx, qptas};
use rsekit::cli::{report_json, solution_json};
use rsekit::{
    br_delta, evaluate, inducibility_gap, solve_exact, solve_maximin, solve_sse, Error, Game, GameValueReport, Gap,
    MixedStrategy, Rational, Scalar,
};
use serde_json::Value;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsekitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGame = 3,
    Parse = 4,
    EnumerationCapExceeded = 5,
    GapTooSmall = 6,
    BudgetExceeded = 7,
    Lp = 8,
    BufferTooSmall = 9,
    Internal = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsekitArith {
    Float = 0,
    Exact = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RsekitMethod {
    Exact = 0,
    Sse = 1,
    Maximin = 2,
    GapApprox = 3,
    Qptas = 4,
}

enum AnyGame {
    Float(Box<Game<f64>>),
    Exact(Box<Game<Rational>>),
}

/// Opaque game handle.
pub struct RsekitGame(AnyGame);

/// Opaque solution handle.
pub struct RsekitSolution {
    value: f64,
    strategy: Vec<f64>,
    response: usize,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RsekitStatus {
    match e {
        Error::InvalidGame(_) => RsekitStatus::InvalidGame,
        Error::Parse(_) => RsekitStatus::Parse,
        Error::EnumerationCapExceeded { .. } => RsekitStatus::EnumerationCapExceeded,
        Error::GapTooSmall { .. } => RsekitStatus::GapTooSmall,
        Error::BudgetExceeded(_) => RsekitStatus::BudgetExceeded,
        Error::Lp(_) | Error::Infeasible(_) => RsekitStatus::Lp,
        Error::InvalidStrategy(_) | Error::InvalidDelta(_) | Error::InvalidParameter(_) => {
            RsekitStatus::InvalidArgument
        }
        _ => RsekitStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (RsekitStatus, String)>) -> RsekitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RsekitStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside rsekit");
            RsekitStatus::Panic
        }
    }
}

type FfiResult<T> = Result<T, (RsekitStatus, String)>;

fn lift<T>(r: rsekit::Result<T>) -> FfiResult<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (RsekitStatus, String) {
    (RsekitStatus::NullPointer, format!("{what} is null"))
}

unsafe fn game_ref<'a>(game: *const RsekitGame) -> FfiResult<&'a AnyGame> {
    game.as_ref().map(|g| &g.0).ok_or_else(|| null("game"))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> FfiResult<&'a [f64]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn to_scalar<T: Scalar>(v: f64, what: &str) -> FfiResult<T> {
    T::from_f64(v).ok_or_else(|| (RsekitStatus::InvalidArgument, format!("{what} is not finite")))
}

fn strategy<T: Scalar>(x: &[f64]) -> FfiResult<MixedStrategy<T>> {
    let probs = x.iter().map(|&p| to_scalar(p, "probability")).collect::<FfiResult<Vec<T>>>()?;
    lift(MixedStrategy::new(probs))
}

fn matrix(data: &[f64], m: usize, n: usize) -> Vec<Vec<f64>> {
    data.chunks(n).take(m).map(<[f64]>::to_vec).collect()
}

fn pack<T: Scalar>(rep: &GameValueReport<T>, json: Value) -> Box<RsekitSolution> {
    let text = serde_json::to_string(&json).expect("serializable");
    Box::new(RsekitSolution {
        value: rep.leader_value.to_f64(),
        strategy: rep.strategy.probs().iter().map(Scalar::to_f64).collect(),
        response: rep.response,
        json: CString::new(text).expect("json has no nul"),
    })
}

fn solve_any<T: Scalar>(game: &Game<T>, method: RsekitMethod, delta: f64, eps: f64) -> FfiResult<Box<RsekitSolution>> {
    let d: T = to_scalar(delta, "delta")?;
    let sol = match method {
        RsekitMethod::Sse | RsekitMethod::Maximin => {
            let rep = lift(if method == RsekitMethod::Sse { solve_sse(game) } else { solve_maximin(game) })?;
            let mut o = report_json(&rep);
            let name = if method == RsekitMethod::Sse { "sse" } else { "maximin" };
            o.insert("method".into(), Value::from(name));
            return Ok(pack(&rep, Value::Object(o)));
        }
        RsekitMethod::Exact => lift(solve_exact(game, &d))?,
        RsekitMethod::GapApprox => lift(gap_approx(game, &d))?,
        RsekitMethod::Qptas => lift(qptas(game, &d, &to_scalar(eps, "epsilon")?))?,
    };
    Ok(pack(&sol.outcome, solution_json(&sol, T::NAME)))
}

/// Last error message on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn rsekit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a game from row-major `m x n` payoff arrays. Entries outside `[0, 1]`
/// trigger normalization.
///
/// # Safety
/// `leader` and `follower` must point to `m * n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsekit_game_new(
    m: usize,
    n: usize,
    leader: *const f64,
    follower: *const f64,
    arith: RsekitArith,
    out: *mut *mut RsekitGame,
) -> RsekitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if m == 0 || n == 0 {
            return Err((RsekitStatus::InvalidGame, "game needs m, n >= 1".into()));
        }
        let size = m.checked_mul(n).ok_or((RsekitStatus::InvalidArgument, "size overflow".to_string()))?;
        let (ul, uf) = (matrix(slice(leader, size, "leader")?, m, n), matrix(slice(follower, size, "follower")?, m, n));
        if ul.iter().chain(&uf).flatten().any(|v| !v.is_finite()) {
            return Err((RsekitStatus::InvalidGame, "payoffs must be finite".into()));
        }
        let game = match arith {
            RsekitArith::Float => AnyGame::Float(Box::new(lift(Game::normalize(ul, uf))?)),
            RsekitArith::Exact => {
                let conv = |a: Vec<Vec<f64>>| -> FfiResult<Vec<Vec<Rational>>> {
                    a.into_iter().map(|row| row.into_iter().map(|v| to_scalar(v, "payoff")).collect()).collect()
                };
                AnyGame::Exact(Box::new(lift(Game::normalize(conv(ul)?, conv(uf)?))?))
            }
        };
        *out = Box::into_raw(Box::new(RsekitGame(game)));
        Ok(())
    })
}

/// Parses a game from its JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsekit_game_from_json(
    json: *const c_char,
    arith: RsekitArith,
    out: *mut *mut RsekitGame,
) -> RsekitStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| (RsekitStatus::Parse, "json is not UTF-8".to_string()))?;
        let value: Value = serde_json::from_str(text).map_err(|e| (RsekitStatus::Parse, e.to_string()))?;
        let game = match arith {
            RsekitArith::Float => AnyGame::Float(Box::new(lift(Game::from_json(&value))?)),
            RsekitArith::Exact => AnyGame::Exact(Box::new(lift(Game::from_json(&value))?)),
        };
        *out = Box::into_raw(Box::new(RsekitGame(game)));
        Ok(())
    })
}

/// # Safety
/// `game` must come from a constructor above and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rsekit_game_free(game: *mut RsekitGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// # Safety
/// `game` must be a live handle; `m` and `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsekit_game_dims(game: *const RsekitGame, m: *mut usize, n: *mut usize) -> RsekitStatus {
    guard(|| {
        if m.is_null() || n.is_null() {
            return Err(null("out"));
        }
        let (a, b) = match game_ref(game)? {
            AnyGame::Float(g) => (g.m(), g.n()),
            AnyGame::Exact(g) => (g.m(), g.n()),
        };
        *m = a;
        *n = b;
        Ok(())
    })
}

/// Writes the delta-best-response set of `x` into `actions` and its size into `len`.
/// Fails with `BufferTooSmall` (after setting `len`) if `capacity` is short.
///
/// # Safety
/// `x` must hold `m` doubles and `actions` must hold `capacity` entries.
#[no_mangle]
pub unsafe extern "C" fn rsekit_br_delta(
    game: *const RsekitGame,
    x: *const f64,
    m: usize,
    delta: f64,
    actions: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> RsekitStatus {
    guard(|| {
        if len.is_null() {
            return Err(null("len"));
        }
        let x = slice(x, m, "x")?;
        let set = match game_ref(game)? {
            AnyGame::Float(g) => lift(br_delta(g, &strategy(x)?, &to_scalar(delta, "delta")?))?,
            AnyGame::Exact(g) => lift(br_delta(g, &strategy(x)?, &to_scalar(delta, "delta")?))?,
        };
        *len = set.len();
        if set.len() > capacity || actions.is_null() {
            return Err((RsekitStatus::BufferTooSmall, format!("need room for {} actions", set.len())));
        }
        ptr::copy_nonoverlapping(set.actions().as_ptr(), actions, set.len());
        Ok(())
    })
}

/// Pessimistic leader value of committing to `x` against a delta-rational follower.
///
/// # Safety
/// `x` must hold `m` doubles; `value` and `response` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsekit_evaluate(
    game: *const RsekitGame,
    x: *const f64,
    m: usize,
    delta: f64,
    value: *mut f64,
    response: *mut usize,
) -> RsekitStatus {
    guard(|| {
        if value.is_null() || response.is_null() {
            return Err(null("out"));
        }
        let x = slice(x, m, "x")?;
        let (v, j) = match game_ref(game)? {
            AnyGame::Float(g) => {
                let r = lift(evaluate(g, &strategy(x)?, &to_scalar(delta, "delta")?))?;
                (r.leader_value, r.response)
            }
            AnyGame::Exact(g) => {
                let r = lift(evaluate(g, &strategy(x)?, &to_scalar(delta, "delta")?))?;
                (r.leader_value.to_f64(), r.response)
            }
        };
        *value = v;
        *response = j;
        Ok(())
    })
}

/// Runs `method` at `delta`. `epsilon` is read only by the QPTAS.
///
/// # Safety
/// `game` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsekit_solve(
    game: *const RsekitGame,
    method: RsekitMethod,
    delta: f64,
    epsilon: f64,
    out: *mut *mut RsekitSolution,
) -> RsekitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sol = match game_ref(game)? {
            AnyGame::Float(g) => solve_any(g, method, delta, epsilon)?,
            AnyGame::Exact(g) => solve_any(g, method, delta, epsilon)?,
        };
        *out = Box::into_raw(sol);
        Ok(())
    })
}

/// Inducibility gap; `infinite` is set when the follower has a single action.
///
/// # Safety
/// `game` must be a live handle; `gap` and `infinite` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsekit_gap(game: *const RsekitGame, gap: *mut f64, infinite: *mut bool) -> RsekitStatus {
    guard(|| {
        if gap.is_null() || infinite.is_null() {
            return Err(null("out"));
        }
        let g = match game_ref(game)? {
            AnyGame::Float(g) => lift(inducibility_gap(g))?,
            AnyGame::Exact(g) => match lift(inducibility_gap(g))? {
                Gap::Infinite => Gap::Infinite,
                Gap::Finite(v) => Gap::Finite(v.to_f64()),
            },
        };
        match g {
            Gap::Infinite => {
                *infinite = true;
                *gap = f64::INFINITY;
            }
            Gap::Finite(v) => {
                *infinite = false;
                *gap = v;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `sol` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn rsekit_solution_value(sol: *const RsekitSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.value)
}

/// # Safety
/// `sol` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn rsekit_solution_response(sol: *const RsekitSolution) -> usize {
    sol.as_ref().map_or(usize::MAX, |s| s.response)
}

/// Copies the leader strategy into `buf`; `len` receives the number of actions.
///
/// # Safety
/// `buf` must hold `capacity` doubles; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rsekit_solution_strategy(
    sol: *const RsekitSolution,
    buf: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> RsekitStatus {
    guard(|| {
        let s = sol.as_ref().ok_or_else(|| null("solution"))?;
        if len.is_null() {
            return Err(null("len"));
        }
        *len = s.strategy.len();
        if s.strategy.len() > capacity || buf.is_null() {
            return Err((RsekitStatus::BufferTooSmall, format!("need room for {} entries", s.strategy.len())));
        }
        ptr::copy_nonoverlapping(s.strategy.as_ptr(), buf, s.strategy.len());
        Ok(())
    })
}

/// Full solution as JSON. Release with `rsekit_string_free`.
///
/// # Safety
/// `sol` must be a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn rsekit_solution_json(sol: *const RsekitSolution) -> *mut c_char {
    match sol.as_ref() {
        Some(s) => s.json.clone().into_raw(),
        None => {
            set_error("solution is null");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `sol` must come from `rsekit_solve` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rsekit_solution_free(sol: *mut RsekitSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rsekit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
