import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    # Единственная переменная окружения, влияющая на поведение: каталог результатов
    OUTPUT_DIR = os.getenv("BSDE_OUTPUT_DIR", "results")
    VERSION = "0.4.0"

    # Матрицы интенсивностей
    COLUMN_SUM_TOL = 1e-12
    RENORMALIZE_TOL = 1e-9
    GAMMA_TOL = 1e-9

    # Решатели
    RESIDUAL_TOL = 1e-10
    MAX_NEWTON_ITER = 100
    MAX_PICARD_ITER = 10000
    RK4_STABILITY = 0.1
    COMPARISON_SLACK = 1e-9
    GRID_CONSISTENCY_TOL = 1e-6

    # Моменты времени достижения
    ABSCISSA_BISECTIONS = 40
    VERTEX_LIMIT = 12

    # Схемы с диодами
    DIODE_SERIES_BAND = 1e-6
    CONDUCTANCE_FLOOR = 1e-15

    # Монте-Карло
    MC_Z_THRESHOLD = 3.0
