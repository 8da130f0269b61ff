//! The commitment-challenge-response authentication scheme.
//!
//! Keys: secret `s`, public base `w`, public conjugate `t = s^-1 w s`. Each
//! round the Prover draws a nonce `r`, commits to a digest of `r^-1 t r`, and
//! answers challenge 0 with `y = r` or challenge 1 with `y = s·r`. The
//! Verifier recomputes the committed digest from `y` and `t` (challenge 0) or
//! `w` (challenge 1).
//!
//! `t` is stored as the literal concatenation `s^-1·w·s`, which makes the
//! challenge-1 verification word `y^-1 w y = r^-1·s^-1·w·s·r` letter-for-letter
//! identical to the committed word `r^-1·t·r`, so the digest check is exact
//! without any braid normal form.

use crate::group::{random_permutation_braid, GroupContext, GroupKind};
use crate::meanset::SampleSet;
use crate::word::{Alphabet, Word};
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::{BufRead, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeygenMode {
    /// `s`, `w`, and nonces are uniform words of length L.
    Classical,
    /// `s`, `w`, and nonces are built from L uniform permutation braids.
    Alternative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChallengeMode {
    /// Fair-coin challenges, the protocol as specified.
    Bernoulli,
    /// Exactly half zeros (round up), shuffled — the experimental setup.
    Balanced,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeyPair {
    context: GroupContext,
    secret: Word,
    base: Word,
    conjugate: Word,
    mode: KeygenMode,
    key_length: u32,
}

impl KeyPair {
    fn assemble(
        context: GroupContext,
        secret: Word,
        base: Word,
        mode: KeygenMode,
        key_length: u32,
    ) -> Result<Self> {
        let conjugate = secret.inverse().concat(&base)?.concat(&secret)?;
        Ok(KeyPair {
            context,
            secret,
            base,
            conjugate,
            mode,
            key_length,
        })
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    pub fn secret(&self) -> &Word {
        &self.secret
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn conjugate(&self) -> &Word {
        &self.conjugate
    }

    pub fn mode(&self) -> KeygenMode {
        self.mode
    }

    pub fn key_length(&self) -> u32 {
        self.key_length
    }

    /// Draw a nonce from the distribution tied to the keygen mode.
    pub fn sample_nonce(&self, rng: &mut impl Rng) -> Word {
        sample_mode_word(&self.context, self.mode, self.key_length, rng)
    }
}

fn sample_mode_word(
    ctx: &GroupContext,
    mode: KeygenMode,
    length: u32,
    rng: &mut impl Rng,
) -> Word {
    match mode {
        KeygenMode::Classical => ctx.random_uniform_word(length, rng),
        KeygenMode::Alternative => {
            let strands = ctx.strands().expect("alternative mode is braid-only");
            let mut word = ctx.identity();
            for _ in 0..length {
                let p = random_permutation_braid(strands, rng);
                word = word.concat(&p).expect("same alphabet");
            }
            word
        }
    }
}

fn check_keygen_context(ctx: &GroupContext, length: u32) -> Result<()> {
    if length == 0 {
        return Err(Error::Config("key length must be at least 1".into()));
    }
    if let Some(strands) = ctx.strands() {
        if strands < 3 {
            return Err(Error::Config(
                "key generation needs at least 3 strands".into(),
            ));
        }
    }
    Ok(())
}

/// Classical key generation: `s` and `w` independent uniform words of length
/// L (drawn in that order), `t = s^-1·w·s`.
pub fn generate_keys_classical(
    ctx: &GroupContext,
    length: u32,
    rng: &mut impl Rng,
) -> Result<KeyPair> {
    check_keygen_context(ctx, length)?;
    let secret = ctx.random_uniform_word(length, rng);
    let base = ctx.random_uniform_word(length, rng);
    KeyPair::assemble(ctx.clone(), secret, base, KeygenMode::Classical, length)
}

/// Alternative key generation (braids only): `s = p_1^-1 ... p_L^-1` for
/// uniform permutation braids p_i, and `w` an independent product of L
/// uniform permutation braids (a positive word).
pub fn generate_keys_alternative(
    ctx: &GroupContext,
    factors: u32,
    rng: &mut impl Rng,
) -> Result<KeyPair> {
    check_keygen_context(ctx, factors)?;
    let strands = ctx
        .strands()
        .ok_or_else(|| Error::Config("alternative keygen requires a braid context".into()))?;
    let mut secret = ctx.identity();
    for _ in 0..factors {
        let p = random_permutation_braid(strands, rng);
        secret = secret.concat(&p.inverse())?;
    }
    let base = sample_mode_word(ctx, KeygenMode::Alternative, factors, rng);
    KeyPair::assemble(ctx.clone(), secret, base, KeygenMode::Alternative, factors)
}

pub const DEFAULT_DIGEST_BITS: u32 = 256;

/// Digest of the comma-serialized free reduction of `word`, truncated to
/// `bits` (a multiple of 8, at most 256).
pub fn commitment_digest_width(word: &Word, bits: u32) -> Result<Vec<u8>> {
    if bits == 0 || bits > 256 || bits % 8 != 0 {
        return Err(Error::Config(format!(
            "digest width must be a positive multiple of 8 up to 256, got {bits}"
        )));
    }
    let hash = Sha256::digest(word.free_reduce().serialize().as_bytes());
    Ok(hash[..(bits / 8) as usize].to_vec())
}

/// Default-width commitment digest.
pub fn commitment_digest(word: &Word) -> Vec<u8> {
    commitment_digest_width(word, DEFAULT_DIGEST_BITS).expect("default width is valid")
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub index: u32,
    /// Digest of the committed word `r^-1·t·r`.
    pub commitment: Vec<u8>,
    pub challenge: bool,
    pub response: Word,
    /// Simulator-private nonce, persisted for analysis only.
    pub nonce: Word,
}

/// One honest protocol round.
pub fn run_round(keys: &KeyPair, index: u32, challenge: bool, rng: &mut impl Rng) -> RoundRecord {
    let nonce = keys.sample_nonce(rng);
    let committed = nonce
        .inverse()
        .concat(keys.conjugate())
        .and_then(|w| w.concat(&nonce))
        .expect("one alphabet");
    let commitment = commitment_digest(&committed);
    let response = if challenge {
        keys.secret().concat(&nonce).expect("one alphabet")
    } else {
        nonce.clone()
    };
    RoundRecord {
        index,
        commitment,
        challenge,
        response,
        nonce,
    }
}

/// Verifier side: recompute the committed digest from the response and the
/// public key only.
pub fn verify_round(keys: &KeyPair, record: &RoundRecord) -> bool {
    let public = if record.challenge {
        keys.base()
    } else {
        keys.conjugate()
    };
    let word = match record
        .response
        .inverse()
        .concat(public)
        .and_then(|w| w.concat(&record.response))
    {
        Ok(w) => w,
        Err(_) => return false,
    };
    commitment_digest(&word) == record.commitment
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub keys: KeyPair,
    pub challenge_mode: ChallengeMode,
    pub rounds: Vec<RoundRecord>,
}

/// Run k rounds with challenges drawn per `mode`.
pub fn run_protocol(
    keys: &KeyPair,
    k: u32,
    mode: ChallengeMode,
    rng: &mut impl Rng,
) -> Result<Transcript> {
    if k == 0 {
        return Err(Error::Config("transcript needs at least one round".into()));
    }
    let challenges: Vec<bool> = match mode {
        ChallengeMode::Bernoulli => (0..k).map(|_| rng.random()).collect(),
        ChallengeMode::Balanced => {
            let zeros = k.div_ceil(2);
            let mut cs: Vec<bool> = (0..k).map(|i| i >= zeros).collect();
            cs.shuffle(rng);
            cs
        }
    };
    let rounds = challenges
        .into_iter()
        .enumerate()
        .map(|(i, c)| run_round(keys, i as u32, c, rng))
        .collect();
    Ok(Transcript {
        keys: keys.clone(),
        challenge_mode: mode,
        rounds,
    })
}

/// The eavesdropper's view: responses split by challenge class.
pub fn eavesdrop(transcript: &Transcript) -> Result<(SampleSet<Word>, SampleSet<Word>)> {
    let mut r0 = Vec::new();
    let mut r1 = Vec::new();
    for round in &transcript.rounds {
        if round.challenge {
            r1.push(round.response.clone());
        } else {
            r0.push(round.response.clone());
        }
    }
    if r0.is_empty() {
        return Err(Error::EmptyChallengeClass { challenge: 0 });
    }
    if r1.is_empty() {
        return Err(Error::EmptyChallengeClass { challenge: 1 });
    }
    Ok((SampleSet::new(r0)?, SampleSet::new(r1)?))
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

/// Key material document: `{group, n, L, mode, seed, s, w, t}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KeyFile {
    pub group: GroupKind,
    pub n: u32,
    #[serde(rename = "L")]
    pub length: u32,
    pub mode: KeygenMode,
    pub seed: u64,
    pub s: String,
    pub w: String,
    pub t: String,
}

impl KeyFile {
    pub fn from_keys(keys: &KeyPair, seed: u64) -> KeyFile {
        KeyFile {
            group: keys.context().kind(),
            n: keys.context().parameter_n(),
            length: keys.key_length(),
            mode: keys.mode(),
            seed,
            s: keys.secret().serialize(),
            w: keys.base().serialize(),
            t: keys.conjugate().serialize(),
        }
    }

    pub fn to_keys(&self) -> Result<KeyPair> {
        let ctx = GroupContext::from_kind(self.group, self.n)?;
        let secret = Word::parse(ctx.alphabet(), &self.s)?;
        let base = Word::parse(ctx.alphabet(), &self.w)?;
        let conjugate = Word::parse(ctx.alphabet(), &self.t)?;
        let literal = secret.inverse().concat(&base)?.concat(&secret)?;
        if conjugate.free_reduce() != literal.free_reduce() {
            return Err(Error::Config(
                "key file conjugate t does not reduce to s^-1·w·s".into(),
            ));
        }
        Ok(KeyPair {
            context: ctx,
            secret,
            base,
            conjugate,
            mode: self.mode,
            key_length: self.length,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RoundLine {
    index: u32,
    challenge: u8,
    response: String,
    commitment: String,
    nonce: String,
}

/// One JSON object per round: `{index, challenge, response, commitment, nonce}`.
pub fn write_transcript_jsonl(transcript: &Transcript, out: &mut impl Write) -> Result<()> {
    for round in &transcript.rounds {
        let line = RoundLine {
            index: round.index,
            challenge: round.challenge as u8,
            response: round.response.serialize(),
            commitment: hex::encode(&round.commitment),
            nonce: round.nonce.serialize(),
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Parse rounds written by [`write_transcript_jsonl`].
pub fn read_transcript_rounds(
    alphabet: Alphabet,
    input: &mut impl BufRead,
) -> Result<Vec<RoundRecord>> {
    let mut rounds = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: RoundLine = serde_json::from_str(&line)?;
        if parsed.challenge > 1 {
            return Err(Error::Config(format!(
                "challenge bit must be 0 or 1, got {}",
                parsed.challenge
            )));
        }
        rounds.push(RoundRecord {
            index: parsed.index,
            commitment: hex::decode(&parsed.commitment)
                .map_err(|e| Error::Config(format!("bad commitment hex: {e}")))?,
            challenge: parsed.challenge == 1,
            response: Word::parse(alphabet, &parsed.response)?,
            nonce: Word::parse(alphabet, &parsed.nonce)?,
        });
    }
    Ok(rounds)
}
