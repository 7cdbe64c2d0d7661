#![allow(dead_code)]

use rand::Rng;
use rcumulative::{ActivitySpec, Instance};

/// Random instance with at most `max_n` activities and horizon at most
/// `max_h`. Roughly half the activities have (almost) fixed starts and build
/// a profile; the rest are free, and tall, so that they get pruned.
pub fn small_instance(rng: &mut impl Rng, max_n: usize, max_h: i64, with_slack: bool) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let horizon = rng.gen_range((2 * n as i64 + 4).min(max_h)..=max_h);
    let capacity = rng.gen_range(3..=10);
    let acts = (0..n)
        .map(|_| {
            let p = rng.gen_range(1..=(horizon / 3).clamp(1, 6));
            let k = if with_slack {
                rng.gen_range(0..=(horizon - p).min(4))
            } else {
                0
            };
            let last = horizon - p - k;
            if rng.gen_bool(0.5) {
                let h = rng.gen_range(1..=(capacity / 3).max(1));
                let lo = rng.gen_range(0..=last);
                let hi = (lo + rng.gen_range(0..=1)).min(last);
                (ActivitySpec::new(p, h, k), lo, hi)
            } else {
                let h = rng.gen_range(1..=capacity);
                let lo = rng.gen_range(0..=last / 3);
                (ActivitySpec::new(p, h, k), lo, last)
            }
        })
        .collect();
    Instance::new(capacity, acts, Some(horizon))
}
