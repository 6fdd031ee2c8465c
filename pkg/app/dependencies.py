from typing import Optional

from app.config import Settings, settings
from app.services.analysis import SylowAnalyzer


def get_settings(ceiling: Optional[int] = None, budget: Optional[int] = None) -> Settings:
    """Провайдер настроек с переопределениями из командной строки"""
    update = {}
    if ceiling is not None:
        update["enumeration_ceiling"] = ceiling
    if budget is not None:
        update["exact_node_budget"] = budget
    return settings.model_copy(update=update) if update else settings


def get_analyzer(config: Optional[Settings] = None) -> SylowAnalyzer:
    """Провайдер для SylowAnalyzer"""
    return SylowAnalyzer(config or settings)
