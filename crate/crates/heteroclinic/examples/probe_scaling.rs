// scratch probe, replaced by the real examples later
use heteroclinic::chart::{solve_homological, ManifoldKind};
use heteroclinic::decimal::parse_interval_exact;
use heteroclinic::interval::Interval;
use heteroclinic::lomeli::{fixed_points, LomeliParams};
use heteroclinic::tail::validate_chart;
use std::time::Instant;

fn main() {
    let arc = LomeliParams::new(
        parse_interval_exact("44/100").unwrap(),
        parse_interval_exact("21/100").unwrap(),
        parse_interval_exact("35/100").unwrap(),
        Interval::point(-0.25),
        parse_interval_exact("-3/10").unwrap(),
    )
    .unwrap();
    let lp = LomeliParams::new(
        Interval::point(0.5),
        Interval::point(-0.5),
        Interval::point(1.0),
        parse_interval_exact("-0.08999").unwrap(),
        parse_interval_exact("8/10").unwrap(),
    )
    .unwrap();

    for (name, params) in [("arc", arc), ("loop", lp)] {
        let (p1, p2) = fixed_points(&params).unwrap();
        for (fp, kind, label) in [
            (&p1, ManifoldKind::Unstable, "unstable"),
            (&p2, ManifoldKind::Stable, "stable"),
        ] {
            for scaling in [1.0, 0.5, 0.25, 0.1, 0.05] {
                let t0 = Instant::now();
                let mut chart = solve_homological(fp, &params, kind, 45, scaling).unwrap();
                let solve_t = t0.elapsed();
                let t1 = Instant::now();
                match validate_chart(&mut chart, &params, None) {
                    Ok((vv, cert)) => println!(
                        "{name}/{label} s={scaling}: delta={:.3e} eps={:.3e} K1={:.3} mu*={:.4} R'={:.3} solve={:?} validate={:?}",
                        cert.delta.hi(),
                        vv.eps_tol.hi(),
                        vv.k1.hi(),
                        vv.mu_star.hi(),
                        vv.r_prime.hi(),
                        solve_t,
                        t1.elapsed()
                    ),
                    Err(e) => println!(
                        "{name}/{label} s={scaling}: FAILED {e} solve={solve_t:?}"
                    ),
                }
            }
        }
    }
}
