//! Fixed-step RK4 for the bouncer with wall-bounce and apex events.

use serde::Serialize;

use super::forms::{Drag, DissipationSpec};
use crate::error::{BouncerError, Result};
use crate::kinds::{Branch, Law};
use crate::units::PhysicalSystem;

/// Bisection depth on the Hermite interpolant.
const EVENT_BISECTIONS: usize = 80;
const EVENT_X_TOL: f64 = 1e-12;
const POLISH_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    /// Generalized momentum; `NaN` outside its domain.
    pub p: f64,
    /// Applicable constant of motion; `NaN` outside its domain.
    pub conserved: f64,
    pub branch: Branch,
    /// Flight arc index: incremented at every bounce.
    pub arc: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounce {
    pub t: f64,
    /// Speed just before the reflection.
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Apex {
    pub t: f64,
    pub x: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub spec: DissipationSpec,
    pub dt: f64,
    pub samples: Vec<Sample>,
    pub bounces: Vec<Bounce>,
    pub apexes: Vec<Apex>,
}

impl Trajectory {
    /// Largest relative spread of the conserved value over any stretch on
    /// which a single closed form applies (one arc and, for quadratic drag,
    /// one branch).
    pub fn max_relative_drift(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut start = 0;
        while start < self.samples.len() {
            let key = (self.samples[start].arc, self.samples[start].branch);
            let mut end = start;
            while end < self.samples.len() && (self.samples[end].arc, self.samples[end].branch) == key {
                end += 1;
            }
            let group = &self.samples[start..end];
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for s in group {
                lo = lo.min(s.conserved);
                hi = hi.max(s.conserved);
            }
            let scale = hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE);
            if group.len() > 1 {
                worst = worst.max((hi - lo) / scale);
            }
            start = end;
        }
        worst
    }

    /// Write `t,x,v,p,K_or_H` rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = crate::io::csv_writer(out);
        w.write_record(["t", "x", "v", "p", "K_or_H"])?;
        for s in &self.samples {
            w.write_record([
                crate::io::fmt17(s.t),
                crate::io::fmt17(s.x),
                crate::io::fmt17(s.v),
                crate::io::fmt17(s.p),
                crate::io::fmt17(s.conserved),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    /// Stop time.
    pub t_end: f64,
    /// Step; `None` picks (first flight time estimate)/2000.
    pub dt: Option<f64>,
    /// Stop after this many bounces.
    pub max_bounces: Option<usize>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            t_end: 10.0,
            dt: None,
            max_bounces: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct State {
    x: f64,
    v: f64,
}

fn rk4(spec: &DissipationSpec, sys: &PhysicalSystem, s: State, h: f64) -> State {
    let a = |v: f64| spec.acceleration(v, sys);
    let (k1x, k1v) = (s.v, a(s.v));
    let (k2x, k2v) = (s.v + 0.5 * h * k1v, a(s.v + 0.5 * h * k1v));
    let (k3x, k3v) = (s.v + 0.5 * h * k2v, a(s.v + 0.5 * h * k2v));
    let (k4x, k4v) = (s.v + h * k3v, a(s.v + h * k3v));
    State {
        x: s.x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        v: s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    }
}

/// Cubic Hermite value at fraction `u` of a step of length `h`.
fn hermite(y0: f64, y1: f64, d0: f64, d1: f64, h: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * y0
        + (u3 - 2.0 * u2 + u) * h * d0
        + (-2.0 * u3 + 3.0 * u2) * y1
        + (u3 - u2) * h * d1
}

/// Fraction of the step at which `f` changes sign, `f(0) * f(1) <= 0`.
fn bisect_fraction(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    let f_lo = f(0.0);
    for _ in 0..EVENT_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < EVENT_X_TOL * 1e-3 {
            return mid;
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

enum Event {
    Bounce,
    Apex,
}

/// Step from `s` to the event inside `(0, h]`, polished by Newton on
/// re-integrated states.
fn locate(
    spec: &DissipationSpec,
    sys: &PhysicalSystem,
    s: State,
    end: State,
    h: f64,
    event: &Event,
) -> Result<(f64, State)> {
    let a0 = spec.acceleration(s.v, sys);
    let a1 = spec.acceleration(end.v, sys);
    let u = match event {
        Event::Bounce => bisect_fraction(|u| hermite(s.x, end.x, s.v, end.v, h, u)),
        Event::Apex => bisect_fraction(|u| hermite(s.v, end.v, a0, a1, h, u)),
    };
    let mut tau = u * h;
    let mut e = rk4(spec, sys, s, tau);
    for _ in 0..POLISH_STEPS {
        let (val, rate) = match event {
            Event::Bounce => (e.x, e.v),
            Event::Apex => (e.v, spec.acceleration(e.v, sys)),
        };
        if rate == 0.0 {
            break;
        }
        let next = (tau - val / rate).clamp(0.0, h);
        let moved = (next - tau).abs();
        tau = next;
        e = rk4(spec, sys, s, tau);
        if moved <= 1e-15 * h {
            break;
        }
    }
    if let Event::Bounce = event {
        if e.x.abs() > EVENT_X_TOL * (1.0 + s.x.abs()) {
            return Err(BouncerError::Convergence {
                what: format!("bounce location (|x| = {:e} at event)", e.x.abs()),
                iterations: EVENT_BISECTIONS + POLISH_STEPS,
            });
        }
    }
    Ok((tau, e))
}

/// Time from `(x0, v0)` to the next wall contact without drag.
fn free_flight_time(x0: f64, v0: f64, g: f64) -> f64 {
    let up = v0.max(0.0);
    let rise = up / g;
    let height = x0 + up * up / (2.0 * g);
    rise + (2.0 * height / g).sqrt()
}

pub fn integrate(
    x0: f64,
    v0: f64,
    spec: &DissipationSpec,
    sys: &PhysicalSystem,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if !(x0.is_finite() && x0 >= 0.0 && v0.is_finite()) {
        return Err(BouncerError::Domain(format!(
            "initial state must be finite with x0 >= 0, got ({x0}, {v0})"
        )));
    }
    if !(opts.t_end.is_finite() && opts.t_end >= 0.0) {
        return Err(BouncerError::Config(format!("t_end must be >= 0, got {}", opts.t_end)));
    }
    let flight = free_flight_time(x0, v0, sys.g());
    let dt = match opts.dt {
        Some(dt) if dt.is_finite() && dt > 0.0 => dt,
        Some(dt) => return Err(BouncerError::Config(format!("dt must be > 0, got {dt}"))),
        None if flight > 0.0 => flight / 2000.0,
        None => {
            return Err(BouncerError::Domain(
                "particle at rest on the wall: nothing to integrate".into(),
            ))
        }
    };

    let quadratic = spec.drag.law() == Law::Quadratic;
    let mut traj = Trajectory {
        spec: *spec,
        dt,
        samples: Vec::new(),
        bounces: Vec::new(),
        apexes: Vec::new(),
    };
    let mut arc = 0;
    let push = |traj: &mut Trajectory, t: f64, s: State, branch: Branch, arc: usize| {
        let spec = match spec.drag {
            Drag::Quadratic(_) => spec.with_branch(branch),
            Drag::Linear(_) => *spec,
        };
        let p = spec.momentum(s.x, s.v, sys).unwrap_or(f64::NAN);
        let conserved = spec.constant_of_motion(s.x, s.v, sys).unwrap_or(f64::NAN);
        traj.samples.push(Sample {
            t,
            x: s.x,
            v: s.v,
            p,
            conserved,
            branch,
            arc,
        });
    };

    let mut t = 0.0;
    let mut s = State { x: x0, v: v0 };
    let mut branch = Branch::for_velocity(v0);
    if x0 == 0.0 && v0 < 0.0 {
        push(&mut traj, t, s, branch, arc);
        traj.bounces.push(Bounce { t, speed: -v0 });
        s.v = -v0;
        arc += 1;
        branch = Branch::Up;
    }
    push(&mut traj, t, s, branch, arc);

    let done = |traj: &Trajectory| opts.max_bounces.is_some_and(|n| traj.bounces.len() >= n);
    while t < opts.t_end && !done(&traj) {
        let h = dt.min(opts.t_end - t);
        let end = rk4(spec, sys, s, h);
        let bounce = end.x < 0.0;
        let apex = s.v > 0.0 && end.v <= 0.0;
        if !bounce && !apex {
            t += h;
            s = end;
            branch = Branch::for_velocity(s.v);
            push(&mut traj, t, s, branch, arc);
            continue;
        }
        // Both events in one step: the apex comes first.
        let event = if apex { Event::Apex } else { Event::Bounce };
        let (tau, mut e) = locate(spec, sys, s, end, h, &event)?;
        t += tau;
        match event {
            Event::Apex => {
                e.v = 0.0;
                push(&mut traj, t, e, Branch::Up, arc);
                traj.apexes.push(Apex { t, x: e.x });
                branch = Branch::Down;
                if quadratic {
                    // The lower-sign forms take over at the apex.
                    push(&mut traj, t, e, branch, arc);
                }
            }
            Event::Bounce => {
                e.x = 0.0;
                push(&mut traj, t, e, branch, arc);
                traj.bounces.push(Bounce { t, speed: -e.v });
                e.v = -e.v;
                arc += 1;
                branch = Branch::Up;
                push(&mut traj, t, e, branch, arc);
            }
        }
        s = e;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinds::Formulation;

    fn spec(drag: Drag) -> DissipationSpec {
        DissipationSpec::new(drag, Formulation::Exact).unwrap()
    }

    #[test]
    fn conservative_bounce_keeps_apex() {
        let sys = PhysicalSystem::normalized();
        let opts = IntegrateOptions {
            t_end: 100.0,
            dt: None,
            max_bounces: Some(3),
        };
        let traj = integrate(0.0, 1.0, &spec(Drag::Linear(0.0)), &sys, &opts).unwrap();
        assert_eq!(traj.bounces.len(), 3);
        assert_eq!(traj.apexes.len(), 3);
        for a in &traj.apexes {
            assert!((a.x - 0.5).abs() < 1e-12, "{}", a.x);
        }
        for b in &traj.bounces {
            assert!((b.speed - 1.0).abs() < 1e-11);
        }
        assert!(traj.samples.iter().all(|s| s.x >= 0.0));
    }

    #[test]
    fn linear_constant_of_motion_holds_on_arcs() {
        let sys = PhysicalSystem::normalized();
        let opts = IntegrateOptions {
            t_end: 100.0,
            dt: None,
            max_bounces: Some(4),
        };
        let traj = integrate(0.0, 1.5, &spec(Drag::Linear(0.1)), &sys, &opts).unwrap();
        assert!(traj.max_relative_drift() < 1e-8, "{}", traj.max_relative_drift());
        let speeds: Vec<f64> = traj.bounces.iter().map(|b| b.speed).collect();
        assert!(speeds.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn starts_on_wall_moving_down() {
        let sys = PhysicalSystem::normalized();
        let opts = IntegrateOptions {
            t_end: 0.5,
            dt: Some(1e-3),
            max_bounces: None,
        };
        let traj = integrate(0.0, -1.0, &spec(Drag::Quadratic(0.1)), &sys, &opts).unwrap();
        assert_eq!(traj.bounces[0].t, 0.0);
        assert!(traj.samples.last().unwrap().v > 0.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let sys = PhysicalSystem::normalized();
        let opts = IntegrateOptions {
            t_end: 0.01,
            dt: Some(0.005),
            max_bounces: None,
        };
        let traj = integrate(0.0, 1.0, &spec(Drag::Quadratic(0.1)), &sys, &opts).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x,v,p,K_or_H");
        assert_eq!(lines.len(), 1 + traj.samples.len());
        assert!(!text.contains('\r'));
    }

    #[test]
    fn rejects_bad_inputs() {
        let sys = PhysicalSystem::normalized();
        let s = spec(Drag::Linear(0.1));
        assert!(integrate(-0.1, 1.0, &s, &sys, &Default::default()).is_err());
        let opts = IntegrateOptions {
            dt: Some(0.0),
            ..Default::default()
        };
        assert!(integrate(0.0, 1.0, &s, &sys, &opts).is_err());
    }
}
