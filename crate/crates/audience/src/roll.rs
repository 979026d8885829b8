use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};
use std::sync::Arc;

use adaudit_wire::{CountyId, Gender};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{AudienceError, Result};

/// One row of a voter file, restricted to the columns the audit uses.
///
/// String columns are shared `Arc<str>` because names, zips and race codes
/// repeat heavily across millions of rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterRecord {
    pub first_name: Arc<str>,
    pub last_name: Arc<str>,
    pub zip: Arc<str>,
    pub county: CountyId,
    pub gender: Gender,
    pub age: u32,
    pub race: Arc<str>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountyWeights {
    #[default]
    Uniform,
    /// County `k` (1-based) gets weight `k^-exponent`.
    Zipf { exponent: f64 },
}

fn default_female_share() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollConfig {
    pub county_count: u32,
    pub rows: usize,
    pub seed: u64,
    #[serde(default)]
    pub county_weights: CountyWeights,
    #[serde(default = "default_female_share")]
    pub female_share: f64,
    /// Per-county overrides of `female_share`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub female_share_by_county: BTreeMap<CountyId, f64>,
}

impl RollConfig {
    pub fn new(county_count: u32, rows: usize, seed: u64) -> Self {
        Self {
            county_count,
            rows,
            seed,
            county_weights: CountyWeights::Uniform,
            female_share: default_female_share(),
            female_share_by_county: BTreeMap::new(),
        }
    }

    pub fn counties(&self) -> impl Iterator<Item = CountyId> {
        (1..=self.county_count).map(CountyId)
    }

    fn validate(&self) -> Result<()> {
        if self.county_count < 2 {
            return Err(AudienceError::InvalidConfiguration(format!(
                "need at least 2 counties, got {}",
                self.county_count
            )));
        }
        if self.rows == 0 {
            return Err(AudienceError::InvalidConfiguration("roll must have at least one row".into()));
        }
        let shares = std::iter::once(&self.female_share).chain(self.female_share_by_county.values());
        for &s in shares {
            if !(0.0..=1.0).contains(&s) {
                return Err(AudienceError::InvalidConfiguration(format!("female share {s} outside [0, 1]")));
            }
        }
        if let CountyWeights::Zipf { exponent } = self.county_weights {
            if !(exponent.is_finite() && exponent >= 0.0) {
                return Err(AudienceError::InvalidConfiguration(format!("bad zipf exponent {exponent}")));
            }
        }
        Ok(())
    }

    /// Rows per county by largest-remainder apportionment.
    fn county_sizes(&self) -> Vec<usize> {
        let weights: Vec<f64> = match self.county_weights {
            CountyWeights::Uniform => vec![1.0; self.county_count as usize],
            CountyWeights::Zipf { exponent } => (1..=self.county_count).map(|k| (k as f64).powf(-exponent)).collect(),
        };
        let total: f64 = weights.iter().sum();
        let quotas: Vec<f64> = weights.iter().map(|w| w / total * self.rows as f64).collect();
        let mut sizes: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
        let mut short = self.rows - sizes.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        order.sort_by(|&a, &b| {
            let (ra, rb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for i in order {
            if short == 0 {
                break;
            }
            sizes[i] += 1;
            short -= 1;
        }
        sizes
    }
}

const MALE_FIRST: &[&str] = &[
    "James", "John", "Robert", "Michael", "William", "David", "Richard", "Joseph", "Thomas", "Charles", "Christopher",
    "Daniel", "Matthew", "Anthony", "Mark", "Donald", "Steven", "Paul", "Andrew", "Joshua", "Kenneth", "Kevin", "Brian",
    "George", "Timothy", "Ronald", "Edward", "Jason", "Jeffrey", "Ryan", "Jacob", "Gary", "Nicholas", "Eric", "Jonathan",
    "Stephen", "Larry", "Justin", "Scott", "Brandon",
];
const FEMALE_FIRST: &[&str] = &[
    "Mary", "Patricia", "Jennifer", "Linda", "Elizabeth", "Barbara", "Susan", "Jessica", "Sarah", "Karen", "Lisa",
    "Nancy", "Betty", "Margaret", "Sandra", "Ashley", "Kimberly", "Emily", "Donna", "Michelle", "Carol", "Amanda",
    "Dorothy", "Melissa", "Deborah", "Stephanie", "Rebecca", "Sharon", "Laura", "Cynthia", "Kathleen", "Amy", "Angela",
    "Shirley", "Anna", "Brenda", "Pamela", "Emma", "Nicole", "Helen",
];
const SURNAME_HEAD: &[&str] = &[
    "Ash", "Black", "Bright", "Brook", "Cald", "Carr", "Cole", "Dal", "Dun", "Ells", "Fair", "Fox", "Gar", "Gold",
    "Hal", "Hart", "Holl", "Kings", "Lang", "Mar",
];
const SURNAME_MID: &[&str] = &[
    "", "a", "e", "er", "en", "in", "o", "and", "ing", "el", "an", "es", "ow", "ers", "ey", "ins", "ly", "ton", "mor",
    "den",
];
const SURNAME_TAIL: &[&str] = &[
    "ford", "well", "wood", "by", "son", "ridge", "field", "more", "ley", "man", "worth", "ham", "ston", "dale",
    "croft", "brook", "wick", "land", "berg", "ton",
];
/// Race codes with roughly statewide voter-file frequencies.
const RACES: &[(&str, u32)] = &[("W", 63), ("B", 21), ("A", 3), ("I", 1), ("M", 2), ("O", 6), ("U", 4)];
const ZIPS_PER_COUNTY: u32 = 10;

struct NamePools {
    male: Vec<Arc<str>>,
    female: Vec<Arc<str>>,
    surnames: Vec<Arc<str>>,
    races: Vec<Arc<str>>,
}

impl NamePools {
    fn new() -> Self {
        let arcs = |xs: &[&str]| xs.iter().map(|s| Arc::<str>::from(*s)).collect::<Vec<_>>();
        let mut surnames = Vec::with_capacity(SURNAME_HEAD.len() * SURNAME_MID.len() * SURNAME_TAIL.len());
        for h in SURNAME_HEAD {
            for m in SURNAME_MID {
                for t in SURNAME_TAIL {
                    surnames.push(Arc::from(format!("{h}{m}{t}")));
                }
            }
        }
        Self {
            male: arcs(MALE_FIRST),
            female: arcs(FEMALE_FIRST),
            surnames,
            races: RACES.iter().map(|(r, _)| Arc::from(*r)).collect(),
        }
    }
}

fn zip_code(county: CountyId, slot: u32) -> String {
    format!("{:05}", (27_000 + county.0 * ZIPS_PER_COUNTY + slot) % 100_000)
}

/// Generates a synthetic voter roll.
///
/// Counties receive rows by apportioning `config.rows` over the county
/// weights. Within each county the number of women is fixed at
/// `round(share × size)` and shuffled into place, so per-county gender mixes
/// are exact rather than sampled. `(first_name, last_name, zip)` is unique
/// across the roll so that uploads can be matched unambiguously.
pub fn generate_synthetic_roll(config: &RollConfig) -> Result<Vec<VoterRecord>> {
    config.validate()?;
    let pools = NamePools::new();
    let race_total: u32 = RACES.iter().map(|(_, w)| w).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seen: HashSet<(u8, u16, u32)> = HashSet::with_capacity(config.rows);
    let mut roll = Vec::with_capacity(config.rows);

    for (county, size) in config.counties().zip(config.county_sizes()) {
        let share = config.female_share_by_county.get(&county).copied().unwrap_or(config.female_share);
        let females = (share * size as f64).round() as usize;
        let mut genders: Vec<Gender> = std::iter::repeat_n(Gender::Female, females)
            .chain(std::iter::repeat_n(Gender::Male, size - females))
            .collect();
        genders.shuffle(&mut rng);
        let zips: Vec<Arc<str>> = (0..ZIPS_PER_COUNTY).map(|s| Arc::from(zip_code(county, s))).collect();

        for gender in genders {
            let firsts = match gender {
                Gender::Male => &pools.male,
                Gender::Female => &pools.female,
            };
            let (first, last, zip) = loop {
                let key = (
                    rng.random_range(0..firsts.len()) as u8,
                    rng.random_range(0..pools.surnames.len()) as u16,
                    rng.random_range(0..ZIPS_PER_COUNTY),
                );
                let gender_tag = u32::from(gender == Gender::Female) << 31;
                if seen.insert((key.0, key.1, (county.0 * ZIPS_PER_COUNTY + key.2) | gender_tag)) {
                    break key;
                }
            };
            let mut pick = rng.random_range(0..race_total);
            let race = RACES
                .iter()
                .position(|(_, w)| {
                    if pick < *w {
                        true
                    } else {
                        pick -= w;
                        false
                    }
                })
                .expect("weights cover range");
            roll.push(VoterRecord {
                first_name: firsts[first as usize].clone(),
                last_name: pools.surnames[last as usize].clone(),
                zip: zips[zip as usize].clone(),
                county,
                gender,
                age: rng.random_range(18..=95),
                race: pools.races[race].clone(),
            });
        }
    }
    Ok(roll)
}

pub const CSV_HEADER: [&str; 7] = ["first_name", "last_name", "zip", "county", "gender", "age", "race"];

pub fn write_roll_csv<W: Write>(roll: &[VoterRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in roll {
        let county = r.county.0.to_string();
        let age = r.age.to_string();
        w.write_record([&*r.first_name, &*r.last_name, &*r.zip, &county, r.gender.code(), &age, &*r.race])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct CsvRow {
    first_name: String,
    last_name: String,
    zip: String,
    county: u32,
    gender: String,
    age: u32,
    race: String,
}

/// Reads a voter roll in the `first_name,last_name,zip,county,gender,age,race` layout.
pub fn read_roll_csv<R: Read>(input: R) -> Result<Vec<VoterRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(AudienceError::InvalidRecord { line: 1, reason: format!("unexpected header {headers:?}") });
    }
    let mut interned: HashMap<String, Arc<str>> = HashMap::new();
    let mut intern = |s: String| interned.entry(s).or_insert_with_key(|k| Arc::from(k.as_str())).clone();
    let mut roll = Vec::new();
    for row in reader.deserialize::<CsvRow>() {
        let row = row?;
        let line = roll.len() as u64 + 2;
        let gender = Gender::from_code(&row.gender)
            .ok_or_else(|| AudienceError::InvalidRecord { line, reason: format!("gender {:?}", row.gender) })?;
        if row.age < 18 {
            return Err(AudienceError::InvalidRecord { line, reason: format!("age {} under 18", row.age) });
        }
        roll.push(VoterRecord {
            first_name: intern(row.first_name),
            last_name: intern(row.last_name),
            zip: intern(row.zip),
            county: CountyId(row.county),
            gender,
            age: row.age,
            race: intern(row.race),
        });
    }
    Ok(roll)
}
