class Columns:
    # Bag-of-words columns
    DOC_ID: str = "doc_id"
    WORD_ID: str = "word_id"
    COUNT: str = "count"
    WORD: str = "word"

    # Topic columns
    @staticmethod
    def get_topic(index: int) -> str:
        return f"topic_{index}"

    # Top words columns
    TOPIC: str = "topic"
    RANK: str = "rank"
    PROBABILITY: str = "probability"

    # Evaluation columns
    RECOVERED_COLUMN: str = "recovered_column"
    TRUE_COLUMN: str = "true_column"
    SIGN_FLIPPED: str = "sign_flipped"
    L2_ERROR: str = "l2_error"
    L1_ERROR: str = "l1_error"

    # Sweep columns
    N_DOCUMENTS: str = "n_documents"
    TRIAL: str = "trial"
    MAX_L2_ERROR: str = "max_l2_error"
    MEDIAN: str = "median"
    LOWER_QUARTILE: str = "lower_quartile"
    UPPER_QUARTILE: str = "upper_quartile"
    CI_HALF_WIDTH: str = "ci_half_width"
    N_TRIALS: str = "n_trials"
