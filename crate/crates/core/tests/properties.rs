use proptest::prelude::*;

use irs_mec::{
    calibrate_interference, local_latency, max_local_data_for_deadline, min_bandwidth_for_deadline,
    offload_latency, received_power_direct, received_power_irs, snr, throughput, ComputeTask,
    DirectLink, IrsLink, Processor, RadioEnvironment, Scenario,
};

fn env() -> RadioEnvironment {
    Scenario::default().environment
}

fn irs() -> IrsLink {
    Scenario::default().irs
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}

proptest! {
    #[test]
    fn direct_power_decreases_with_distance(d in 1.5f64..1e3, step in 1e-3f64..100.0) {
        let link = DirectLink::new(5.0, 1e6, d, 1.0).unwrap();
        let far = DirectLink { distance_m: d + step, ..link };
        prop_assert!(received_power_direct(&far, &env()).unwrap() < received_power_direct(&link, &env()).unwrap());
    }

    #[test]
    fn direct_power_decreases_with_exponent(alpha in 1.0f64..7.0, step in 1e-3f64..1.0) {
        let link = DirectLink::new(5.0, 1e6, 200.0, 1.0).unwrap();
        let lo = RadioEnvironment { path_loss_exponent: alpha, ..env() };
        let hi = RadioEnvironment { path_loss_exponent: alpha + step, ..env() };
        prop_assert!(received_power_direct(&link, &hi).unwrap() < received_power_direct(&link, &lo).unwrap());
    }

    #[test]
    fn throughput_increases_and_is_linear_in_bandwidth(b in 1.0f64..1e9, s in 1e-6f64..1e6) {
        let r = throughput(b, s).unwrap();
        prop_assert!(throughput(b * 1.01, s).unwrap() > r);
        prop_assert!(throughput(b, s * 1.01).unwrap() > r);
        prop_assert!(close(r, b * throughput(1.0, s).unwrap(), 1e-12));
    }

    #[test]
    fn received_powers_are_linear_in_tx_power(k in 1e-3f64..1e3) {
        let d = DirectLink::new(5.0, 1e6, 200.0, 1.0).unwrap();
        let dk = DirectLink { tx_power_w: 5.0 * k, ..d };
        prop_assert!(close(received_power_direct(&dk, &env()).unwrap(), k * received_power_direct(&d, &env()).unwrap(), 1e-12));
        let i = irs();
        let ik = IrsLink { tx_power_w: i.tx_power_w * k, ..i };
        prop_assert!(close(received_power_irs(&ik, &env()).unwrap(), k * received_power_irs(&i, &env()).unwrap(), 1e-12));
    }

    #[test]
    fn irs_is_symmetric_and_scales_inverse_square(d1 in 1.0f64..500.0, d2 in 1.0f64..500.0, k in 0.01f64..100.0) {
        let a = IrsLink { d1_m: d1, d2_m: d2, ..irs() };
        let b = IrsLink { d1_m: d2, d2_m: d1, ..irs() };
        let p = received_power_irs(&a, &env()).unwrap();
        prop_assert!(close(received_power_irs(&b, &env()).unwrap(), p, 1e-12));
        let c = IrsLink { d1_m: d1 * k.sqrt(), d2_m: d2 * k.sqrt(), ..irs() };
        prop_assert!(close(received_power_irs(&c, &env()).unwrap(), p / (k * k), 1e-12));
    }

    #[test]
    fn irs_quadruples_per_panel_dimension_doubling(m in 1u32..500, n in 1u32..500, amp in 0.01f64..=1.0) {
        let mut link = irs();
        link.panel.elements_m = m;
        link.panel.elements_n = n;
        link.panel.amplitude = amp;
        let p = received_power_irs(&link, &env()).unwrap();
        let mut big = link;
        big.panel.elements_m = 2 * m;
        big.panel.elements_n = 2 * n;
        prop_assert!(close(received_power_irs(&big, &env()).unwrap(), 16.0 * p, 1e-12));
        let mut dim = link;
        dim.panel.amplitude = amp / 2.0;
        prop_assert!(close(received_power_irs(&dim, &env()).unwrap(), p / 4.0, 1e-12));
    }

    #[test]
    fn offload_latency_decomposes_and_falls_with_resources(
        bytes in 0u64..1_000_000, rate in 1e3f64..1e9, free in 1e8f64..1e11,
    ) {
        let task = ComputeTask::new(bytes, 1000.0, 0.03).unwrap();
        let mec = Processor::idle(free).unwrap();
        let l = offload_latency(&task, rate, &mec).unwrap();
        prop_assert!(l.transmission_s >= 0.0 && l.processing_s >= 0.0);
        prop_assert_eq!(l.total_s(), l.transmission_s + l.processing_s);
        if bytes > 0 {
            prop_assert!(offload_latency(&task, rate * 1.01, &mec).unwrap().total_s() < l.total_s());
            let faster = Processor::idle(free * 1.01).unwrap();
            prop_assert!(offload_latency(&task, rate, &faster).unwrap().total_s() < l.total_s());
        }
    }

    #[test]
    fn min_bandwidth_round_trips(bytes in 1u64..200_000, s in 1e-3f64..1e5, deadline in 0.002f64..1.0) {
        let task = ComputeTask::new(bytes, 1000.0, deadline).unwrap();
        let mec = Processor::idle(8e9).unwrap();
        prop_assume!(task.cycles() / 8e9 < deadline * 0.999);
        let b = min_bandwidth_for_deadline(&task, s, &mec).unwrap();
        let t = offload_latency(&task, throughput(b, s).unwrap(), &mec).unwrap().total_s();
        prop_assert!(close(t, deadline, 1e-9), "{} vs {}", t, deadline);
    }

    #[test]
    fn calibration_round_trips(rate in 1.0f64..1e8, d in 1.0f64..1e3, b in 1e3f64..1e8) {
        let link = DirectLink::new(5.0, b, d, 1.0).unwrap();
        let n = calibrate_interference(&link, 5.5, rate).unwrap();
        let e = RadioEnvironment { interference_power_w: n, ..env() };
        let back = throughput(b, snr(received_power_direct(&link, &e).unwrap(), &e).unwrap()).unwrap();
        prop_assert!(close(back, rate, 1e-9), "{} vs {}", back, rate);
    }

    #[test]
    fn max_local_data_is_tight(hz in 1e8f64..1e10, c in 1.0f64..1e4, deadline in 1e-4f64..1.0) {
        let cpu = Processor::idle(hz).unwrap();
        let max = max_local_data_for_deadline(&cpu, c, deadline).unwrap();
        let fits = |bytes| local_latency(&ComputeTask::new(bytes, c, deadline).unwrap(), &cpu).unwrap() <= deadline;
        prop_assert!(fits(max));
        prop_assert!(!fits(max + 1));
    }
}

#[test]
fn irs_latency_never_exceeds_direct_on_default_grid() {
    let s = Scenario::default();
    for b in s.bandwidth_grid() {
        let d = irs_mec::experiments::direct_rate(&s, b, s.direct.distance_m).unwrap();
        let r = irs_mec::experiments::irs_rate(&s, b, s.irs.d1_m, s.irs.d2_m).unwrap();
        for task in s.tasks() {
            let ld = offload_latency(&task, d, &s.mec).unwrap().total_s();
            let lr = offload_latency(&task, r, &s.mec).unwrap().total_s();
            assert!(lr <= ld, "B = {b}, {} B", task.data_bytes);
        }
    }
}
