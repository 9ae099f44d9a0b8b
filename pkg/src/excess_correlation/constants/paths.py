from pathlib import Path

import excess_correlation

BASE_DIR = Path(excess_correlation.__file__).resolve().parent

RUN_SPECIFICATION = BASE_DIR / "configuration.yaml"

# Output file names
DOCWORD_FILE = "docword.txt"
VOCAB_FILE = "vocab.txt"
TOPICS_FILE = "topics.tsv"
TRUE_TOPICS_FILE = "true_topics.tsv"
TOP_WORDS_FILE = "top_words.tsv"
SAMPLES_FILE = "samples.npz"
MOMENTS_FILE = "moments.npz"
SWEEP_TABLE_FILE = "sweep.tsv"
SWEEP_TRIALS_FILE = "sweep_trials.tsv"
EVALUATION_FILE = "evaluation.tsv"
EVALUATION_RECORD_FILE = "evaluation.yaml"
METADATA_FILE = "metadata.yaml"
CONFIGURATION_FILE = "configuration.yaml"
