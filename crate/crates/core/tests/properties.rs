#[path = "support/properties.rs"]
mod properties;

macro_rules! suite {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                properties::$name().unwrap();
            }
        )*
    };
}

suite!(
    position_bounds,
    x_convexity,
    y_floor,
    decay_keeps_x,
    lazy_decay_composes,
    severity_concave_in_f,
    regions_partition_field,
    weights_respect_cap,
    streak_reset,
    replay_is_exact,
);
