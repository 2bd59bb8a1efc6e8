use std::path::Path;

use serde::Deserialize;
use sofic_core::approx::{
    alpha_from_images, check_consequence_instance, check_metric_instance, search_separating_hom,
    search_sofic_instance, ApproximationCertificate, ApproximationWindow, CertificateMode,
    HomSearchOutcome, InstanceFailure, InstanceVerdict, Presentation, SearchOptions, SearchStats,
    SoficCertificate, SoficSearchOutcome,
};
use sofic_core::group::is_n_separated;
use sofic_core::length::LengthFunction;
use sofic_core::perm::length_of_tensor_power;
use sofic_core::rational::parse_rational;
use sofic_core::word::Word;
use sofic_core::{FiniteGroup, NormalizedLength, Permutation, Rational};
use toml::{Table, Value};

use crate::report::{self, big, int, len, perms, rat, strings, Report};
use crate::{CliError, CliResult, Context, EXIT_OK};

/// Bounds for the best-effort check that `Φ` words lie in the normal closure.
const CLOSURE_FACTORS: usize = 2;
const CLOSURE_CONJUGATOR_LEN: usize = 1;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum CertificateFile {
    Consequence {
        group: String,
        generators: Vec<String>,
        words: Vec<String>,
        images: Vec<String>,
        identity_image: Option<String>,
        n: usize,
    },
    Metric {
        group: String,
        generators: Vec<String>,
        words: Vec<String>,
        images: Vec<String>,
        identity_image: Option<String>,
        #[serde(default = "hamming_name")]
        length: String,
        #[serde(default)]
        cayley_base: Vec<String>,
        cayley_n: Option<u32>,
        alpha: Option<Vec<String>>,
        epsilon: String,
    },
    Separation {
        group: String,
        generators: Vec<String>,
        tests: Vec<String>,
        normal_words: Vec<String>,
        generator_images: Vec<String>,
        n: usize,
    },
    Sofic {
        group: String,
        generators: Vec<String>,
        test: String,
        normal_words: Vec<String>,
        generator_images: Vec<String>,
        amplification: u32,
        symmetric_embedding: bool,
        epsilon: String,
        test_length: String,
        normal_lengths: Vec<String>,
    },
}

fn hamming_name() -> String {
    "hamming".into()
}

fn rational(field: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| CliError::Input(format!("{field}: {e}")))
}

fn parse_words(
    source: &str,
    field: &str,
    generators: &[String],
    texts: &[String],
) -> CliResult<Vec<Word>> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Word::parse(t, |n| generators.iter().position(|g| g == n))
                .map_err(|e| CliError::located(format!("{source} {field}[{i}]"), e))
        })
        .collect()
}

fn parse_perms(
    ctx: &Context,
    g: &FiniteGroup,
    field: &str,
    texts: &[String],
) -> CliResult<Vec<Permutation>> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| ctx.element(g, t, &format!("{field}[{i}]")))
        .collect()
}

fn window_certificate(
    ctx: &Context,
    source: &str,
    group: &str,
    generators: &[String],
    words: &[String],
    images: &[String],
    identity_image: Option<&str>,
) -> CliResult<ApproximationCertificate> {
    let g = ctx.group(group)?;
    let parsed = parse_words(source, "words", generators, words)?;
    let window = ApproximationWindow::new(generators.to_vec(), parsed)?;
    if window.words().len() != words.len() + 1 {
        return Err(CliError::Input(
            "window words must be distinct and non-trivial".into(),
        ));
    }
    if images.len() != words.len() {
        return Err(CliError::Input(format!(
            "{} images for {} words",
            images.len(),
            words.len()
        )));
    }
    let identity = match identity_image {
        Some(t) => ctx.element(&g, t, "identity_image")?,
        None => Permutation::identity(g.degree()),
    };
    let mut all = vec![identity];
    all.extend(parse_perms(ctx, &g, "images", images)?);
    Ok(ApproximationCertificate {
        window,
        target: g,
        images: all,
        mode: CertificateMode::Consequence { n: 1 },
    })
}

fn failure_text(cert: &ApproximationCertificate, f: &InstanceFailure) -> String {
    match f {
        InstanceFailure::IdentityNotFixed => "identity-not-fixed".into(),
        InstanceFailure::SeparationViolated => "separation-violated".into(),
        InstanceFailure::AlphaNotMet(i) => {
            format!("alpha-not-met: {}", cert.window.format_word(*i))
        }
        InstanceFailure::DefectTooLong(row) => {
            let (g, h, _) = cert.window.table()[*row];
            format!(
                "defect-too-long: ({}, {})",
                cert.window.format_word(g),
                cert.window.format_word(h)
            )
        }
    }
}

fn write_instance(
    report: &mut Report,
    kind: &str,
    cert: &ApproximationCertificate,
    v: &InstanceVerdict,
) {
    let r = report.section("result");
    r.insert("kind".into(), kind.into());
    r.insert("group".into(), cert.target.name().into());
    r.insert("window_size".into(), int(cert.window.words().len()));
    r.insert("table_rows".into(), int(cert.window.table().len()));
    r.insert("holds".into(), v.holds.into());
    if let Some(f) = &v.failure {
        r.insert("failure".into(), failure_text(cert, f).into());
    }
    r.insert("defects".into(), perms(&v.defects));
    if let Some(s) = &v.separation {
        r.insert("separation".into(), report::separation(s));
    }
}

/// A certificate file, or a report carrying a `[certificate]` table.
fn load_certificate(ctx: &Context, path: &Path) -> CliResult<CertificateFile> {
    let source = path.display().to_string();
    let text = ctx.read(path)?;
    let mut table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Input(format!("{source}: {e}")))?;
    if let Some(Value::Table(inner)) = table.remove("certificate") {
        table = inner;
    }
    Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Input(format!("{source}: {}", e.message())))
}

pub(crate) fn check(ctx: &Context, report: &mut Report, path: &Path) -> CliResult<i32> {
    let source = path.display().to_string();
    match load_certificate(ctx, path)? {
        CertificateFile::Consequence {
            group,
            generators,
            words,
            images,
            identity_image,
            n,
        } => {
            let mut cert = window_certificate(
                ctx,
                &source,
                &group,
                &generators,
                &words,
                &images,
                identity_image.as_deref(),
            )?;
            cert.mode = CertificateMode::Consequence { n };
            let v = check_consequence_instance(&cert)?;
            write_instance(report, "consequence", &cert, &v);
        }
        CertificateFile::Metric {
            group,
            generators,
            words,
            images,
            identity_image,
            length,
            cayley_base,
            cayley_n,
            alpha,
            epsilon,
        } => {
            let mut cert = window_certificate(
                ctx,
                &source,
                &group,
                &generators,
                &words,
                &images,
                identity_image.as_deref(),
            )?;
            let g = cert.target.clone();
            let length = match length.as_str() {
                "hamming" => LengthFunction::hamming(g.clone()),
                "cayley" => {
                    let n = cayley_n
                        .ok_or_else(|| CliError::Input("cayley length needs cayley_n".into()))?;
                    let base = parse_perms(ctx, &g, "cayley_base", &cayley_base)?;
                    LengthFunction::cayley_conjugation(g.clone(), &base, n)?
                }
                other => return Err(CliError::Input(format!("unknown length `{other}`"))),
            };
            let alpha = match alpha {
                Some(values) => {
                    if values.len() != words.len() {
                        return Err(CliError::Input(format!(
                            "{} alpha values for {} words",
                            values.len(),
                            words.len()
                        )));
                    }
                    let mut a = vec![Some(Rational::from_integer(0.into()))];
                    for (i, v) in values.iter().enumerate() {
                        a.push(Some(rational(&format!("alpha[{i}]"), v)?));
                    }
                    a
                }
                None => alpha_from_images(&length, &cert.images)?,
            };
            cert.mode = CertificateMode::Metric {
                length,
                alpha,
                epsilon: rational("epsilon", &epsilon)?,
            };
            let v = check_metric_instance(&cert)?;
            write_instance(report, "metric", &cert, &v);
        }
        CertificateFile::Separation {
            group,
            generators,
            tests,
            normal_words,
            generator_images,
            n,
        } => {
            let g = ctx.group(&group)?;
            let images = parse_perms(ctx, &g, "generator_images", &generator_images)?;
            if images.len() != generators.len() {
                return Err(CliError::Input(
                    "one image per generator is required".into(),
                ));
            }
            let eval = |field: &str, texts: &[String]| -> CliResult<Vec<Permutation>> {
                parse_words(&source, field, &generators, texts)?
                    .iter()
                    .map(|w| Ok(w.evaluate(&images, g.degree())?))
                    .collect()
            };
            let ys = eval("tests", &tests)?;
            let phis = eval("normal_words", &normal_words)?;
            let sep = is_n_separated(&g, &ys, &phis, n)?;
            let r = report.section("result");
            r.insert("kind".into(), "separation".into());
            r.insert("group".into(), g.name().into());
            r.insert("holds".into(), sep.verdict.is_separated().into());
            r.insert("test_images".into(), perms(&ys));
            r.insert("normal_images".into(), perms(&phis));
            r.insert("separation".into(), report::separation(&sep));
        }
        CertificateFile::Sofic {
            group,
            generators,
            test,
            normal_words,
            generator_images,
            amplification,
            symmetric_embedding,
            epsilon,
            test_length,
            normal_lengths,
        } => {
            let g = ctx.group(&group)?;
            let images = parse_perms(ctx, &g, "generator_images", &generator_images)?;
            if images.len() != generators.len() {
                return Err(CliError::Input(
                    "one image per generator is required".into(),
                ));
            }
            let presentation = Presentation {
                generators: generators.clone(),
                relators: Vec::new(),
                tests: parse_words(&source, "test", &generators, std::slice::from_ref(&test))?,
                normal_words: parse_words(&source, "normal_words", &generators, &normal_words)?,
            };
            let stored = |field: &str, text: &str| -> CliResult<NormalizedLength> {
                Ok(NormalizedLength::new(rational(field, text)?)?)
            };
            let raw = presentation.tests[0]
                .evaluate(&images, g.degree())?
                .hamming_length();
            let cert = SoficCertificate {
                group: g.name().to_owned(),
                base_degree: g.degree(),
                symmetric_embedding,
                generator_images: images,
                raw_test_length: raw.clone(),
                amplification,
                final_degree: (g.degree() as u128).pow(amplification)
                    * if symmetric_embedding { 2 } else { 1 },
                test_length: stored("test_length", &test_length)?,
                normal_lengths: normal_lengths
                    .iter()
                    .enumerate()
                    .map(|(i, t)| stored(&format!("normal_lengths[{i}]"), t))
                    .collect::<CliResult<_>>()?,
                stats: SearchStats {
                    per_group: Vec::new(),
                    total: 0,
                },
            };
            if amplification == 0 {
                return Err(CliError::Input("amplification must be at least 1".into()));
            }
            let holds = cert.verify(&presentation, &rational("epsilon", &epsilon)?)?;
            let r = report.section("result");
            r.insert("kind".into(), "sofic".into());
            r.insert("group".into(), g.name().into());
            r.insert("holds".into(), holds.into());
            r.insert("raw_test_length".into(), len(&raw));
            r.insert(
                "amplified_test_length".into(),
                len(&length_of_tensor_power(&raw, amplification)),
            );
            r.insert("final_degree".into(), big(cert.final_degree));
        }
    }
    Ok(EXIT_OK)
}

fn read_presentation(ctx: &Context, path: &Path) -> CliResult<Presentation> {
    let text = ctx.read(path)?;
    Presentation::parse(&text).map_err(|e| CliError::located(path.display().to_string(), e))
}

fn stats_value(stats: &SearchStats) -> Value {
    let per_group = stats
        .per_group
        .iter()
        .map(|(name, visited)| {
            report::table([
                ("group", name.as_str().into()),
                ("candidates", int(*visited)),
            ])
        })
        .collect();
    report::table([
        ("candidates", int(stats.total)),
        ("per_group", Value::Array(per_group)),
    ])
}

fn format_words(p: &Presentation, words: &[Word]) -> Vec<String> {
    words.iter().map(|w| p.format_word(w)).collect()
}

pub(crate) fn search(
    ctx: &Context,
    report: &mut Report,
    path: &Path,
    n: usize,
    groups: Option<&str>,
    prune: bool,
) -> CliResult<i32> {
    let p = read_presentation(ctx, path)?;
    let catalog = ctx.group_list(groups)?;
    let options = SearchOptions {
        budget: ctx.common.budget,
        prune_conjugates: prune,
    };
    let outcome = search_separating_hom(&p, n, &catalog, options)?;
    let closure = p.check_normal_words(CLOSURE_FACTORS, CLOSURE_CONJUGATOR_LEN);
    let r = report.section("result");
    r.insert(
        "catalog".into(),
        strings(&catalog.iter().map(|g| g.name()).collect::<Vec<_>>()),
    );
    r.insert("n".into(), int(n));
    r.insert("prune_conjugates".into(), prune.into());
    r.insert(
        "normal_words_in_closure".into(),
        report::table([
            ("max_factors", int(CLOSURE_FACTORS)),
            ("max_conjugator_length", int(CLOSURE_CONJUGATOR_LEN)),
            (
                "found",
                Value::Array(closure.into_iter().map(Value::Boolean).collect()),
            ),
        ]),
    );
    match outcome {
        HomSearchOutcome::Found(found) => {
            r.insert("outcome".into(), "found".into());
            r.insert("group".into(), found.group.as_str().into());
            r.insert("generator_images".into(), perms(&found.generator_images));
            r.insert("test_images".into(), perms(&found.test_images));
            r.insert("normal_images".into(), perms(&found.normal_images));
            r.insert("separation".into(), report::separation(&found.separation));
            r.insert("stats".into(), stats_value(&found.stats));
            let cert = report.section("certificate");
            cert.insert("kind".into(), "separation".into());
            cert.insert("group".into(), found.group.as_str().into());
            cert.insert("generators".into(), strings(&p.generators));
            cert.insert("tests".into(), strings(&format_words(&p, &p.tests)));
            cert.insert(
                "normal_words".into(),
                strings(&format_words(&p, &p.normal_words)),
            );
            cert.insert("generator_images".into(), perms(&found.generator_images));
            cert.insert("n".into(), int(n));
        }
        HomSearchOutcome::Exhausted(stats) => {
            r.insert("outcome".into(), "exhausted".into());
            r.insert("stats".into(), stats_value(&stats));
        }
    }
    Ok(EXIT_OK)
}

pub(crate) fn sofic(
    ctx: &Context,
    report: &mut Report,
    path: &Path,
    eps: &str,
    groups: Option<&str>,
) -> CliResult<i32> {
    let p = read_presentation(ctx, path)?;
    let epsilon = rational("--eps", eps)?;
    let catalog = ctx.group_list(groups)?;
    let options = SearchOptions {
        budget: ctx.common.budget,
        prune_conjugates: false,
    };
    let outcome = search_sofic_instance(&p, &epsilon, &catalog, options)?;
    let r = report.section("result");
    r.insert(
        "catalog".into(),
        strings(&catalog.iter().map(|g| g.name()).collect::<Vec<_>>()),
    );
    r.insert("epsilon".into(), rat(&epsilon));
    match outcome {
        SoficSearchOutcome::Found(c) => {
            r.insert("outcome".into(), "found".into());
            r.insert("group".into(), c.group.as_str().into());
            r.insert("generator_images".into(), perms(&c.generator_images));
            r.insert("raw_test_length".into(), len(&c.raw_test_length));
            r.insert("amplification".into(), int(c.amplification));
            r.insert("symmetric_embedding".into(), c.symmetric_embedding.into());
            r.insert("final_degree".into(), big(c.final_degree));
            r.insert("test_length".into(), len(&c.test_length));
            r.insert(
                "normal_lengths".into(),
                Value::Array(c.normal_lengths.iter().map(len).collect()),
            );
            r.insert("stats".into(), stats_value(&c.stats));
            let cert = report.section("certificate");
            cert.insert("kind".into(), "sofic".into());
            cert.insert("group".into(), c.group.as_str().into());
            cert.insert("generators".into(), strings(&p.generators));
            cert.insert("test".into(), p.format_word(&p.tests[0]).into());
            cert.insert(
                "normal_words".into(),
                strings(&format_words(&p, &p.normal_words)),
            );
            cert.insert("generator_images".into(), perms(&c.generator_images));
            cert.insert("amplification".into(), int(c.amplification));
            cert.insert("symmetric_embedding".into(), c.symmetric_embedding.into());
            cert.insert("epsilon".into(), rat(&epsilon));
            cert.insert("test_length".into(), len(&c.test_length));
            cert.insert(
                "normal_lengths".into(),
                Value::Array(c.normal_lengths.iter().map(len).collect()),
            );
        }
        SoficSearchOutcome::Exhausted(stats) => {
            r.insert("outcome".into(), "exhausted".into());
            r.insert("stats".into(), stats_value(&stats));
        }
    }
    Ok(EXIT_OK)
}
