use std::io::{Read, Write};

use crate::{Error, Result};

/// Largest sieve limit accepted by [`sieve_divisor_tables`] (about 0.8 GB of tables).
pub const DEFAULT_ENTRY_BUDGET: u64 = 100_000_000;

const CACHE_MAGIC: &[u8; 8] = b"TAU3TBL\0";
const CACHE_VERSION: u64 = 1;

/// `τ(n)` and `τ₃(n)` for `1 ≤ n ≤ limit`. Index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTables {
    limit: u64,
    tau: Vec<u32>,
    tau3: Vec<u32>,
}

impl DivisorTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn tau(&self, n: u64) -> u32 {
        self.tau[n as usize]
    }

    #[inline]
    pub fn tau3(&self, n: u64) -> u32 {
        self.tau3[n as usize]
    }

    /// Raw `τ` slice including the unused slot 0.
    pub fn tau_slice(&self) -> &[u32] {
        &self.tau
    }

    /// Raw `τ₃` slice including the unused slot 0.
    pub fn tau3_slice(&self) -> &[u32] {
        &self.tau3
    }

    pub fn require(&self, need: u64) -> Result<()> {
        if self.limit < need {
            return Err(Error::TablesTooSmall {
                have: self.limit,
                need,
            });
        }
        Ok(())
    }

    /// Serialize as: magic, format version, limit, then `τ(1..=N)` and
    /// `τ₃(1..=N)`, every field a little-endian `u64`.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.limit.to_le_bytes())?;
        for table in [&self.tau, &self.tau3] {
            let mut buf = Vec::with_capacity(8 * self.limit as usize);
            for &v in &table[1..] {
                buf.extend_from_slice(&(v as u64).to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Precondition("not a divisor-table cache file".into()));
        }
        let version = read_u64(&mut r)?;
        if version != CACHE_VERSION {
            return Err(Error::Precondition(format!("unsupported cache version {version}")));
        }
        let limit = read_u64(&mut r)?;
        if limit == 0 || limit > DEFAULT_ENTRY_BUDGET {
            return Err(Error::Precondition(format!("implausible cached limit {limit}")));
        }
        let read_table = |r: &mut R| -> Result<Vec<u32>> {
            let mut bytes = vec![0u8; 8 * limit as usize];
            r.read_exact(&mut bytes)?;
            let mut out = Vec::with_capacity(limit as usize + 1);
            out.push(0);
            for chunk in bytes.chunks_exact(8) {
                let v = u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
                out.push(u32::try_from(v).map_err(|_| Error::Precondition("cached count overflows".into()))?);
            }
            Ok(out)
        };
        let tau = read_table(&mut r)?;
        let tau3 = read_table(&mut r)?;
        Ok(DivisorTables { limit, tau, tau3 })
    }

    /// Load from `dir` if a cache for at least `limit` exists, otherwise sieve
    /// and store it there.
    pub fn cached(dir: &std::path::Path, limit: u64) -> Result<Self> {
        let path = dir.join(format!("divisor-tables-{limit}.bin"));
        if let Ok(f) = std::fs::File::open(&path) {
            if let Ok(t) = Self::read_from(std::io::BufReader::new(f)) {
                if t.limit == limit {
                    return Ok(t);
                }
            }
        }
        let t = sieve_divisor_tables(limit)?;
        std::fs::create_dir_all(dir)?;
        let f = std::fs::File::create(&path)?;
        t.write_to(std::io::BufWriter::new(f))?;
        Ok(t)
    }
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub fn sieve_divisor_tables(limit: u64) -> Result<DivisorTables> {
    sieve_divisor_tables_with_budget(limit, DEFAULT_ENTRY_BUDGET)
}

/// Linear sieve for `τ`, then `τ₃ = 1 * τ` by one pass over multiples.
pub fn sieve_divisor_tables_with_budget(limit: u64, budget: u64) -> Result<DivisorTables> {
    if limit == 0 {
        return Err(Error::Precondition("sieve limit must be at least 1".into()));
    }
    if limit > budget || limit >= u32::MAX as u64 {
        return Err(Error::LimitTooLarge {
            requested: limit,
            budget,
        });
    }
    let n = limit as usize;
    let mut tau = vec![0u32; n + 1];
    // exponent of the smallest prime factor
    let mut spf_exp = vec![0u8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    tau[1] = 1;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            tau[i] = 2;
            spf_exp[i] = 1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                let e = spf_exp[i] as u32;
                tau[m] = tau[i] / (e + 1) * (e + 2);
                spf_exp[m] = spf_exp[i] + 1;
                break;
            }
            tau[m] = tau[i] * 2;
            spf_exp[m] = 1;
        }
    }
    drop(composite);
    drop(spf_exp);

    let mut tau3 = vec![0u32; n + 1];
    for d in 1..=n {
        let mut k = 1;
        let mut m = d;
        while m <= n {
            tau3[m] += tau[k];
            k += 1;
            m += d;
        }
    }
    Ok(DivisorTables { limit, tau, tau3 })
}
