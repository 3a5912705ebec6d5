"""Exception hierarchy; every error raised on bad input derives from ValueError."""


class IntentMinerError(ValueError):
    pass


class CorpusError(IntentMinerError):
    pass


class VocabularyError(IntentMinerError):
    pass


class SelectionError(IntentMinerError):
    pass


class TrainingError(IntentMinerError):
    pass


class EvaluationError(IntentMinerError):
    pass


class ConfigError(IntentMinerError):
    pass


class PipelineError(IntentMinerError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
