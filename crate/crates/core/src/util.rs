/// 64-bit FNV-1a. Stable across platforms and releases, unlike `DefaultHasher`.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Seed for a per-record random stream.
pub fn stream_seed(seed: u64, record: &str, stream: &str) -> u64 {
    let mut key = Vec::with_capacity(record.len() + stream.len() + 9);
    key.extend_from_slice(&seed.to_le_bytes());
    key.extend_from_slice(stream.as_bytes());
    key.push(0);
    key.extend_from_slice(record.as_bytes());
    fnv1a(&key)
}
