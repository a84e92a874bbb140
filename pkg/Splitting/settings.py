"""
Django settings for the Splitting project.

Generated by 'django-admin startproject' using Django 5.2.8.
"""

from pathlib import Path
from dotenv import load_dotenv
import os

BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(BASE_DIR / ".env")

SECRET_KEY = os.getenv(
    "DJANGO_SECRET_KEY",
    "django-insecure-5p!x3k#lr0q^w@8z$d2m&v7c+n4e_b9h(t1y)a6s-f%g*j",
)

DEBUG = os.getenv("DJANGO_DEBUG", "1") == "1"

# Pour dev local
ALLOWED_HOSTS = ["localhost", "127.0.0.1"]

# -----------------------------------
# Applications
# -----------------------------------
INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",

    # Ajouts
    "rest_framework",

    "restoration.apps.RestorationConfig",
]

# -----------------------------------
# Middleware
# -----------------------------------
MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",

    # CSRF doit être actif pour SessionAuthentication
    "django.middleware.csrf.CsrfViewMiddleware",

    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "Splitting.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "Splitting.wsgi.application"
ASGI_APPLICATION = "Splitting.asgi.application"

# -----------------------------------
# Database (sqlite: only run recording touches it)
# -----------------------------------
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.getenv("RESTORATION_DB_PATH", str(BASE_DIR / "db.sqlite3")),
    }
}

AUTH_PASSWORD_VALIDATORS = [
    {"NAME": "django.contrib.auth.password_validation.UserAttributeSimilarityValidator"},
    {"NAME": "django.contrib.auth.password_validation.MinimumLengthValidator"},
    {"NAME": "django.contrib.auth.password_validation.CommonPasswordValidator"},
    {"NAME": "django.contrib.auth.password_validation.NumericPasswordValidator"},
]

# -----------------------------------
# i18n
# -----------------------------------
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = True
USE_TZ = True

# -----------------------------------
# Static
# -----------------------------------
STATIC_URL = "static/"
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# =========================================================
# DRF: SessionAuthentication (cookies) + CSRF
# =========================================================
REST_FRAMEWORK = {
    "DEFAULT_AUTHENTICATION_CLASSES": [
        "rest_framework.authentication.SessionAuthentication",
    ],
    "DEFAULT_PERMISSION_CLASSES": [
        "rest_framework.permissions.IsAuthenticated",
    ],
}

# =========================================================
# Restoration library defaults (override via RESTORATION_<KEY>)
# =========================================================
def _env_float(key: str, default: float) -> float:
    raw = os.getenv(f"RESTORATION_{key}")
    return float(raw) if raw not in (None, "") else default


def _env_int(key: str, default: int) -> int:
    raw = os.getenv(f"RESTORATION_{key}")
    return int(raw) if raw not in (None, "") else default


RESTORATION = {
    "POWER_ITERATION_MAX_ITERS": _env_int("POWER_ITERATION_MAX_ITERS", 1000),
    "POWER_ITERATION_TOL": _env_float("POWER_ITERATION_TOL", 1e-8),
    "POWER_ITERATION_SEED": _env_int("POWER_ITERATION_SEED", 12345),
    "DEFAULT_NOISE_SIGMA": _env_float("DEFAULT_NOISE_SIGMA", 1e-3),
    "DEFAULT_STOP_TOL": _env_float("DEFAULT_STOP_TOL", 1e-10),
    "DEFAULT_CHECKPOINTS": [
        int(v)
        for v in os.getenv(
            "RESTORATION_DEFAULT_CHECKPOINTS", "1,5,10,25,50,100,250,500,1000"
        ).split(",")
    ],
    "COMPARE_WORKERS": _env_int("COMPARE_WORKERS", 1),
}

# =========================================================
# Logging
# =========================================================
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "%(asctime)s %(levelname)s %(name)s %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple"},
    },
    "loggers": {
        "restoration": {
            "handlers": ["console"],
            "level": os.getenv("RESTORATION_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}
