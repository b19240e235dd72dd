//! Round-based protection protocol.
//!
//! Each round the `n` sources send one symbol apiece. A rotating set of `m`
//! connections carries parity symbols of the round's `k` data symbols;
//! failed links lose their symbol in flight, and a receiver that knows the
//! failure positions queries the surviving receivers and erasure-decodes.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codes::{CodeError, ErasurePattern, ProtectionCode};
use crate::gf2::{Bit, BitVector};
use crate::netmodel::{Capacity, NetError, Network, Packet, PacketKind, RoundStamp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("erased packets do not match the failure scenario")]
    ScenarioMismatch,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Rotation schedule: in round `r` the connections `(r + j) mod n`,
/// `j < m`, carry encoded packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    m: usize,
    rounds: u64,
}

pub fn build_schedule(n: usize, m: usize, rounds: u64) -> Result<Schedule, ProtocolError> {
    if m < 1 || m >= n {
        return Err(ProtocolError::InvalidParameters(format!(
            "need 1 <= m < n, got n={n}, m={m}"
        )));
    }
    if rounds < 1 {
        return Err(ProtocolError::InvalidParameters(
            "rounds must be at least 1".into(),
        ));
    }
    Ok(Schedule { n, m, rounds })
}

impl Schedule {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    fn offset(&self, round: u64) -> usize {
        (round % self.n as u64) as usize
    }

    /// Connections carrying encoded packets in `round`, in parity order.
    pub fn encoded(&self, round: u64) -> Vec<usize> {
        let r = self.offset(round);
        (0..self.m).map(|j| (r + j) % self.n).collect()
    }

    pub fn is_encoded(&self, round: u64, connection: usize) -> bool {
        (connection + self.n - self.offset(round)) % self.n < self.m
    }

    /// Connection carrying each codeword coordinate in `round`. Data
    /// coordinates go to the unscheduled connections in increasing order;
    /// parity coordinate `k + i` goes to `(r + i) mod n`.
    pub fn layout(&self, round: u64) -> Vec<usize> {
        let mut coords: Vec<usize> = (0..self.n)
            .filter(|&c| !self.is_encoded(round, c))
            .collect();
        coords.extend(self.encoded(round));
        coords
    }

    /// How often each connection is scheduled for encoding over rounds
    /// `0..rounds`.
    pub fn encoded_counts(&self, rounds: u64) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for r in 0..rounds {
            for c in self.encoded(r) {
                counts[c] += 1;
            }
        }
        counts
    }
}

fn check_dimensions(code: &ProtectionCode, sched: &Schedule) -> Result<(), ProtocolError> {
    if code.n() != sched.n || code.m() != sched.m {
        return Err(ProtocolError::DimensionMismatch(format!(
            "code is [{}, {}] but schedule has n={}, m={}",
            code.n(),
            code.k(),
            sched.n,
            sched.m
        )));
    }
    Ok(())
}

/// Packets for one round, indexed by connection.
pub fn encode_round(
    net: &Network,
    sched: &Schedule,
    round: u64,
    code: &ProtectionCode,
    data: &BitVector,
) -> Result<Vec<Packet>, ProtocolError> {
    check_dimensions(code, sched)?;
    if net.n() != code.n() {
        return Err(ProtocolError::DimensionMismatch(format!(
            "network has {} connections, code length {}",
            net.n(),
            code.n()
        )));
    }
    let codeword = code.encode(data)?;
    let stamp = RoundStamp::of_round(round, sched.n);
    let mut packets: Vec<Option<Packet>> = vec![None; sched.n];
    for (coord, conn) in sched.layout(round).into_iter().enumerate() {
        packets[conn] = Some(Packet {
            connection: conn,
            sender: net.connection(conn)?.source,
            payload: Some(codeword.get(coord)),
            stamp,
            kind: if coord < code.k() {
                PacketKind::Data
            } else {
                PacketKind::Encoded
            },
        });
    }
    Ok(packets
        .into_iter()
        .map(|p| p.expect("layout is a permutation"))
        .collect())
}

/// Connections whose links fail during a round. Positions are known to
/// every receiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FailureScenario {
    failed: Vec<usize>,
}

impl FailureScenario {
    pub fn new(n: usize, failed: impl IntoIterator<Item = usize>) -> Result<Self, ProtocolError> {
        let pattern = ErasurePattern::new(n, failed)?;
        Ok(Self {
            failed: pattern.positions().to_vec(),
        })
    }

    pub fn none() -> Self {
        Self { failed: Vec::new() }
    }

    /// Failed connections in increasing order.
    pub fn failed(&self) -> &[usize] {
        &self.failed
    }

    pub fn t(&self) -> usize {
        self.failed.len()
    }

    pub fn contains(&self, connection: usize) -> bool {
        self.failed.binary_search(&connection).is_ok()
    }
}

/// Erases the payload of every packet on a failed connection.
pub fn inject_failures(packets: &[Packet], scenario: &FailureScenario) -> Vec<Packet> {
    packets
        .iter()
        .map(|p| {
            let mut p = p.clone();
            if scenario.contains(p.connection) {
                p.payload = None;
            }
            p
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    FullRecovery,
    NoActionNeeded,
    Unrecoverable,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::FullRecovery => "FullRecovery",
            Outcome::NoActionNeeded => "NoActionNeeded",
            Outcome::Unrecoverable => "Unrecoverable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryReport {
    pub round: u64,
    pub failed: Vec<usize>,
    /// Failed data connection to the symbol recovered for it.
    pub recovered: BTreeMap<usize, Bit>,
    pub queries_sent: usize,
    pub xor_operations: usize,
    pub transmissions: usize,
    pub outcome: Outcome,
}

/// Recovers the data lost on failed working paths.
///
/// A single failed data link is repaired by its own receiver, which queries
/// the other `n - 1` receivers. With `t >= 2` failures a receiver on a
/// surviving encoded link queries the other `n - t - 1` live receivers.
/// Failures confined to encoded links need no action.
pub fn recover(
    code: &ProtectionCode,
    surviving: &[Packet],
    scenario: &FailureScenario,
    sched: &Schedule,
    round: u64,
) -> Result<RecoveryReport, ProtocolError> {
    check_dimensions(code, sched)?;
    let n = code.n();
    if surviving.len() != n {
        return Err(ProtocolError::DimensionMismatch(format!(
            "{} packets for {n} connections",
            surviving.len()
        )));
    }
    let mut by_connection: Vec<Option<&Packet>> = vec![None; n];
    for p in surviving {
        let slot = by_connection.get_mut(p.connection).ok_or_else(|| {
            ProtocolError::DimensionMismatch(format!("packet on connection {}", p.connection))
        })?;
        *slot = Some(p);
    }
    let packets: Vec<&Packet> = by_connection
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| ProtocolError::DimensionMismatch("missing packet".into()))?;
    if scenario.failed().iter().any(|&c| c >= n)
        || packets
            .iter()
            .any(|p| p.is_erased() != scenario.contains(p.connection))
    {
        return Err(ProtocolError::ScenarioMismatch);
    }

    let t = scenario.t();
    let mut report = RecoveryReport {
        round,
        failed: scenario.failed().to_vec(),
        recovered: BTreeMap::new(),
        queries_sent: 0,
        xor_operations: 0,
        transmissions: n,
        outcome: Outcome::NoActionNeeded,
    };
    let lost_data: Vec<usize> = scenario
        .failed()
        .iter()
        .copied()
        .filter(|&c| packets[c].kind == PacketKind::Data)
        .collect();
    if lost_data.is_empty() {
        return Ok(report);
    }

    let layout = sched.layout(round);
    let mut received = BitVector::zeros(n);
    let mut erased = Vec::with_capacity(t);
    let mut coord_of = vec![0; n];
    for (coord, &conn) in layout.iter().enumerate() {
        coord_of[conn] = coord;
        match packets[conn].payload {
            Some(bit) => received.set(coord, bit),
            None => erased.push(coord),
        }
    }
    let pattern = ErasurePattern::new(n, erased)?;
    report.queries_sent = if t == 1 {
        n - 1
    } else {
        n.saturating_sub(t + 1)
    };

    match code.erasure_decode_traced(&received, &pattern) {
        Ok(decoded) => {
            report.xor_operations = decoded.xor_operations;
            for c in lost_data {
                report
                    .recovered
                    .insert(c, decoded.codeword.get(coord_of[c]));
            }
            report.outcome = Outcome::FullRecovery;
        }
        Err(CodeError::AmbiguousErasure) => report.outcome = Outcome::Unrecoverable,
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

/// Source of the per-round failure scenario.
pub trait FailureModel {
    fn next_scenario(&mut self, round: u64, n: usize) -> Result<FailureScenario, ProtocolError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoFailures;

impl FailureModel for NoFailures {
    fn next_scenario(&mut self, _round: u64, _n: usize) -> Result<FailureScenario, ProtocolError> {
        Ok(FailureScenario::none())
    }
}

/// The same connections fail in every round.
#[derive(Debug, Clone)]
pub struct FixedFailures {
    failed: Vec<usize>,
}

impl FixedFailures {
    pub fn new(failed: Vec<usize>) -> Self {
        Self { failed }
    }
}

impl FailureModel for FixedFailures {
    fn next_scenario(&mut self, _round: u64, n: usize) -> Result<FailureScenario, ProtocolError> {
        FailureScenario::new(n, self.failed.iter().copied())
    }
}

/// `t` distinct connections chosen uniformly at random each round.
#[derive(Debug, Clone)]
pub struct RandomFailures {
    t: usize,
    rng: ChaCha8Rng,
}

impl RandomFailures {
    pub fn new(t: usize, seed: u64) -> Self {
        Self::from_rng(t, ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn from_rng(t: usize, rng: ChaCha8Rng) -> Self {
        Self { t, rng }
    }
}

impl FailureModel for RandomFailures {
    fn next_scenario(&mut self, _round: u64, n: usize) -> Result<FailureScenario, ProtocolError> {
        if self.t > n {
            return Err(ProtocolError::InvalidParameters(format!(
                "t = {} exceeds n = {n}",
                self.t
            )));
        }
        FailureScenario::new(n, index::sample(&mut self.rng, n, self.t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub report: RecoveryReport,
    /// Connections that carried a data packet this round.
    pub data_packets: usize,
}

impl RoundRecord {
    pub fn capacity(&self) -> Capacity {
        Ratio::new(self.data_packets as u64, self.report.transmissions as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationMetrics {
    pub rounds: Vec<RoundRecord>,
    pub avg_capacity: Capacity,
    pub recovery_rate: Capacity,
    pub total_transmissions: u64,
    pub total_queries: u64,
    pub total_xor_operations: u64,
    pub per_connection_encoded_counts: Vec<usize>,
    /// Recovered symbols that differ from what was sent. Zero unless the
    /// decoder is broken.
    pub symbol_errors: usize,
}

/// Drives `rounds` rounds of encode, fail, recover. Payload bits come from
/// `rng`; link state in `net` follows each round's scenario and is restored
/// afterwards.
pub fn run_simulation<R: Rng + ?Sized>(
    net: &mut Network,
    code: &ProtectionCode,
    sched: &Schedule,
    failures: &mut dyn FailureModel,
    rounds: u64,
    rng: &mut R,
) -> Result<SimulationMetrics, ProtocolError> {
    check_dimensions(code, sched)?;
    if rounds < 1 || rounds > sched.rounds {
        return Err(ProtocolError::InvalidParameters(format!(
            "rounds must be in [1, {}], got {rounds}",
            sched.rounds
        )));
    }
    let n = code.n();
    let mut records = Vec::with_capacity(rounds as usize);
    let mut counts = vec![0; n];
    let mut symbol_errors = 0;
    for round in 0..rounds {
        let data = BitVector::from_bits((0..code.k()).map(|_| rng.gen::<bool>()))
            .map_err(CodeError::from)?;
        let sent = encode_round(net, sched, round, code, &data)?;
        let scenario = failures.next_scenario(round, n)?;
        for &c in scenario.failed() {
            net.fail_link(c)?;
        }
        let delivered = inject_failures(&sent, &scenario);
        let report = recover(code, &delivered, &scenario, sched, round)?;
        net.repair_all();

        symbol_errors += report
            .recovered
            .iter()
            .filter(|&(&c, &bit)| sent[c].payload != Some(bit))
            .count();
        let mut data_packets = 0;
        for p in &sent {
            match p.kind {
                PacketKind::Data => data_packets += 1,
                PacketKind::Encoded => counts[p.connection] += 1,
            }
        }
        records.push(RoundRecord {
            report,
            data_packets,
        });
    }

    let total_transmissions: u64 = records.iter().map(|r| r.report.transmissions as u64).sum();
    let data_total: u64 = records.iter().map(|r| r.data_packets as u64).sum();
    let recovered_rounds = records
        .iter()
        .filter(|r| r.report.outcome != Outcome::Unrecoverable)
        .count() as u64;
    Ok(SimulationMetrics {
        avg_capacity: Ratio::new(data_total, total_transmissions),
        recovery_rate: Ratio::new(recovered_rounds, rounds),
        total_transmissions,
        total_queries: records.iter().map(|r| r.report.queries_sent as u64).sum(),
        total_xor_operations: records.iter().map(|r| r.report.xor_operations as u64).sum(),
        per_connection_encoded_counts: counts,
        symbol_errors,
        rounds: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: &[u8]) -> BitVector {
        BitVector::from_u8s(bits).unwrap()
    }

    fn payloads(packets: &[Packet]) -> Vec<Option<Bit>> {
        packets.iter().map(|p| p.payload).collect()
    }

    #[test]
    fn schedule_examples() {
        let s = build_schedule(5, 1, 5).unwrap();
        let diag: Vec<Vec<usize>> = (0..5).map(|r| s.encoded(r)).collect();
        assert_eq!(diag, vec![vec![0], vec![1], vec![2], vec![3], vec![4]]);

        let s = build_schedule(4, 1, 8).unwrap();
        assert_eq!(s.encoded_counts(8), vec![2, 2, 2, 2]);

        let s = build_schedule(7, 3, 1).unwrap();
        assert_eq!(s.encoded(0), vec![0, 1, 2]);
        assert_eq!(s.encoded(6), vec![6, 0, 1]);
        assert!(s.is_encoded(6, 0) && !s.is_encoded(6, 2));

        for (n, m, r) in [(5, 0, 1), (5, 5, 1), (3, 1, 0)] {
            assert!(matches!(
                build_schedule(n, m, r),
                Err(ProtocolError::InvalidParameters(_))
            ));
        }
    }

    #[test]
    fn layout_is_a_permutation() {
        let s = build_schedule(7, 3, 10).unwrap();
        for r in 0..10 {
            let mut l = s.layout(r);
            assert_eq!(&l[4..], s.encoded(r).as_slice());
            l.sort_unstable();
            assert_eq!(l, (0..7).collect::<Vec<_>>());
        }
    }

    #[test]
    fn encode_round_single_parity() {
        let net = Network::direct(5).unwrap();
        let code = ProtectionCode::single_parity(5).unwrap();
        let sched = build_schedule(5, 1, 5).unwrap();
        let x = v(&[1, 0, 1, 1]);
        // Round 4 schedules the last connection.
        let packets = encode_round(&net, &sched, 4, &code, &x).unwrap();
        assert_eq!(
            payloads(&packets),
            vec![Some(true), Some(false), Some(true), Some(true), Some(true)]
        );
        assert_eq!(packets[4].kind, PacketKind::Encoded);
        assert!(packets[..4].iter().all(|p| p.kind == PacketKind::Data));
        assert_eq!(packets[2].sender, net.connections()[2].source);
        assert_eq!(packets[2].stamp, RoundStamp { cycle: 0, step: 4 });

        let zeros = encode_round(&net, &sched, 2, &code, &BitVector::zeros(4)).unwrap();
        assert!(zeros.iter().all(|p| p.payload == Some(false)));
    }

    #[test]
    fn encode_round_hamming_matches_encode() {
        let net = Network::direct(7).unwrap();
        let code = ProtectionCode::hamming(3).unwrap();
        let sched = build_schedule(7, 3, 7).unwrap();
        let x = v(&[1, 0, 1, 1]);
        let cw = code.encode(&x).unwrap();
        for r in 0..7 {
            let packets = encode_round(&net, &sched, r, &code, &x).unwrap();
            for (i, conn) in sched.encoded(r).into_iter().enumerate() {
                assert_eq!(packets[conn].kind, PacketKind::Encoded);
                assert_eq!(packets[conn].payload, Some(cw.get(4 + i)));
            }
        }
    }

    #[test]
    fn encode_round_rejects_mismatch() {
        let net = Network::direct(5).unwrap();
        let code = ProtectionCode::single_parity(5).unwrap();
        let sched = build_schedule(5, 2, 5).unwrap();
        assert!(matches!(
            encode_round(&net, &sched, 0, &code, &BitVector::zeros(4)),
            Err(ProtocolError::DimensionMismatch(_))
        ));
        let sched = build_schedule(5, 1, 5).unwrap();
        assert!(encode_round(&net, &sched, 0, &code, &BitVector::zeros(3)).is_err());
    }

    #[test]
    fn inject_failures_examples() {
        let net = Network::direct(5).unwrap();
        let code = ProtectionCode::single_parity(5).unwrap();
        let sched = build_schedule(5, 1, 5).unwrap();
        let packets = encode_round(&net, &sched, 0, &code, &v(&[1, 1, 0, 1])).unwrap();
        assert_eq!(inject_failures(&packets, &FailureScenario::none()), packets);
        let all = FailureScenario::new(5, 0..5).unwrap();
        assert!(inject_failures(&packets, &all)
            .iter()
            .all(Packet::is_erased));
        let one = FailureScenario::new(5, [2]).unwrap();
        let hit = inject_failures(&packets, &one);
        assert_eq!(hit.iter().filter(|p| p.is_erased()).count(), 1);
        assert!(hit[2].is_erased());
    }

    #[test]
    fn recover_single_parity_cases() {
        let net = Network::direct(5).unwrap();
        let code = ProtectionCode::single_parity(5).unwrap();
        let sched = build_schedule(5, 1, 5).unwrap();
        let packets = encode_round(&net, &sched, 0, &code, &v(&[1, 1, 0, 1])).unwrap();

        // Connection 0 is encoded in round 0; connection 3 carries data.
        let data_fail = FailureScenario::new(5, [3]).unwrap();
        let r = recover(
            &code,
            &inject_failures(&packets, &data_fail),
            &data_fail,
            &sched,
            0,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::FullRecovery);
        assert_eq!(
            (r.queries_sent, r.xor_operations, r.transmissions),
            (4, 3, 5)
        );
        assert_eq!(r.recovered.get(&3).copied(), packets[3].payload);

        let enc_fail = FailureScenario::new(5, [0]).unwrap();
        let r = recover(
            &code,
            &inject_failures(&packets, &enc_fail),
            &enc_fail,
            &sched,
            0,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::NoActionNeeded);
        assert_eq!((r.queries_sent, r.xor_operations), (0, 0));
        assert!(r.recovered.is_empty());

        let two = FailureScenario::new(5, [1, 2]).unwrap();
        let r = recover(&code, &inject_failures(&packets, &two), &two, &sched, 0).unwrap();
        assert_eq!(r.outcome, Outcome::Unrecoverable);
    }

    #[test]
    fn recover_hamming_two_data_failures() {
        let net = Network::direct(7).unwrap();
        let code = ProtectionCode::hamming(3).unwrap();
        let sched = build_schedule(7, 3, 7).unwrap();
        let packets = encode_round(&net, &sched, 0, &code, &v(&[1, 0, 1, 1])).unwrap();
        // Round 0: connections 0..3 encoded, 3..7 data.
        let s = FailureScenario::new(7, [3, 5]).unwrap();
        let r = recover(&code, &inject_failures(&packets, &s), &s, &sched, 0).unwrap();
        assert_eq!(r.outcome, Outcome::FullRecovery);
        assert_eq!(r.queries_sent, 4);
        assert_eq!(r.recovered.get(&3).copied(), packets[3].payload);
        assert_eq!(r.recovered.get(&5).copied(), packets[5].payload);
    }

    #[test]
    fn recover_mixed_failures_only_restores_data() {
        let net = Network::direct(7).unwrap();
        let code = ProtectionCode::hamming(3).unwrap();
        let sched = build_schedule(7, 3, 7).unwrap();
        let packets = encode_round(&net, &sched, 0, &code, &v(&[0, 1, 1, 1])).unwrap();
        let s = FailureScenario::new(7, [1, 4]).unwrap();
        let r = recover(&code, &inject_failures(&packets, &s), &s, &sched, 0).unwrap();
        assert_eq!(r.outcome, Outcome::FullRecovery);
        assert_eq!(r.recovered.keys().copied().collect::<Vec<_>>(), vec![4]);
        assert_eq!(r.queries_sent, 4);
    }

    #[test]
    fn recover_rejects_mismatched_scenario() {
        let net = Network::direct(5).unwrap();
        let code = ProtectionCode::single_parity(5).unwrap();
        let sched = build_schedule(5, 1, 5).unwrap();
        let packets = encode_round(&net, &sched, 0, &code, &v(&[1, 1, 0, 1])).unwrap();
        let s = FailureScenario::new(5, [3]).unwrap();
        assert_eq!(
            recover(&code, &packets, &s, &sched, 0),
            Err(ProtocolError::ScenarioMismatch)
        );
    }

    #[test]
    fn simulation_capacity_and_counts() {
        let mut net = Network::direct(5).unwrap();
        let code = ProtectionCode::single_parity(5).unwrap();
        let sched = build_schedule(5, 1, 100).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = run_simulation(&mut net, &code, &sched, &mut NoFailures, 100, &mut rng).unwrap();
        assert_eq!(m.avg_capacity, Ratio::new(4, 5));
        assert_eq!(m.total_transmissions, 500);
        assert_eq!(m.recovery_rate, Ratio::from_integer(1));

        let m = run_simulation(&mut net, &code, &sched, &mut NoFailures, 5, &mut rng).unwrap();
        assert_eq!(m.per_connection_encoded_counts, vec![1; 5]);

        let mut net = Network::direct(7).unwrap();
        let code = ProtectionCode::hamming(3).unwrap();
        let sched = build_schedule(7, 3, 13).unwrap();
        let mut failures = RandomFailures::new(2, 1);
        let m = run_simulation(&mut net, &code, &sched, &mut failures, 13, &mut rng).unwrap();
        assert_eq!(m.avg_capacity, Ratio::new(4, 7));
        assert_eq!(m.recovery_rate, Ratio::from_integer(1));
        assert_eq!(m.symbol_errors, 0);
        assert_eq!(net.average_capacity(), Ratio::from_integer(1));
    }

    #[test]
    fn simulation_rejects_bad_rounds() {
        let mut net = Network::direct(5).unwrap();
        let code = ProtectionCode::single_parity(5).unwrap();
        let sched = build_schedule(5, 1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for rounds in [0, 4] {
            assert!(matches!(
                run_simulation(&mut net, &code, &sched, &mut NoFailures, rounds, &mut rng),
                Err(ProtocolError::InvalidParameters(_))
            ));
        }
    }

    #[test]
    fn random_failures_are_seeded() {
        let draw = |seed| {
            let mut f = RandomFailures::new(3, seed);
            (0..20)
                .map(|r| f.next_scenario(r, 15).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
        assert!(draw(1).iter().all(|s| s.t() == 3));
        assert!(RandomFailures::new(6, 0).next_scenario(0, 5).is_err());
    }
}
