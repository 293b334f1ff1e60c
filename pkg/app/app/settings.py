"""
Django settings for the allocplan project.

Library defaults (seed, worker cap, output directory, log level) come from
ALLOCPLAN_* environment variables; the remaining settings only serve the
stateless HTTP surface.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get("SECRET_KEY", "changeme")

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = bool(int(os.environ.get("DEBUG", 0)))

ALLOWED_HOSTS = ["testserver", "localhost"]
ALLOWED_HOSTS.extend(
    filter(
        None,
        os.environ.get("ALLOWED_HOSTS", "").split(","),
    )
)

# Application definition

INSTALLED_APPS = [
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.staticfiles",
    "rest_framework",
    "drf_spectacular",
    "core",
    "allocation",
    "estimator",
    "scaling",
    "synthetic",
    "harness",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.middleware.common.CommonMiddleware",
]

ROOT_URLCONF = "app.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
            ],
        },
    },
]

WSGI_APPLICATION = "app.wsgi.application"

# Nothing is persisted; the database only satisfies Django's app registry.
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": ":memory:",
    }
}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

STATIC_URL = "/static/"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

REST_FRAMEWORK = {
    "DEFAULT_SCHEMA_CLASS": "drf_spectacular.openapi.AutoSchema",
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": [
        "rest_framework.permissions.AllowAny",
    ],
}

SPECTACULAR_SETTINGS = {
    "TITLE": "allocplan API",
    "DESCRIPTION": (
        "Training-set allocation planning: scaling-law fits, optimal "
        "allocations and group-weighted estimator analysis."
    ),
    "VERSION": "1",
    "COMPONENT_SPLIT_REQUEST": True,
}

# allocplan

ALLOCPLAN_SEED = int(os.environ.get("ALLOCPLAN_SEED", 0))

ALLOCPLAN_THREADS = int(
    os.environ.get("ALLOCPLAN_THREADS", os.cpu_count() or 1)
)

ALLOCPLAN_OUTPUT_DIR = os.environ.get("ALLOCPLAN_OUTPUT_DIR", ".")

ALLOCPLAN_SCHEMA_VERSION = "1"

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
        },
    },
    "loggers": {
        name: {
            "handlers": ["console"],
            "level": os.environ.get("ALLOCPLAN_LOG_LEVEL", "WARNING"),
            "propagate": False,
        }
        for name in (
            "core",
            "allocation",
            "estimator",
            "scaling",
            "synthetic",
            "harness",
        )
    },
}
