from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Потолки и бюджеты вычислений (переменные окружения с префиксом SYLOW_)"""

    # Максимальный порядок поля GF(q)
    field_ceiling: int = 2 ** 20
    # Максимальное число силовских подгрупп для явного перечисления
    enumeration_ceiling: int = 10 ** 6
    # Переборные оракулы по всем элементам G
    oracle_group_limit: int = 10 ** 5
    normalizer_check_limit: int = 10 ** 4
    fingerprint_limit: int = 2 * 10 ** 4
    redundancy_oracle_limit: int = 10 ** 4

    # Точный поиск минимального покрытия
    exact_sylow_budget: int = 64
    exact_element_budget: int = 512
    exact_node_budget: int = 5 * 10 ** 5
    # Лимит времени точного поиска в секундах (0 - без лимита)
    exact_time_limit: float = 5.0
    greedy_sylow_budget: int = 4096

    # Регулярный модуль размерности |P| - 1
    thm1_max_group_order: int = 64

    union_exact_max_n: int = 4
    union_exact_max_sylows: int = 64

    scan_workers: int = 1
    log_level: str = "INFO"

    class Config:
        env_file = ".env"
        env_prefix = "SYLOW_"


settings = Settings()
