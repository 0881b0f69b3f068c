"""
bvpkit Configuration Module
"""

import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Base configuration class.

    Values stay decimal strings here; the CLI parses them so a malformed
    value is reported as a usage error instead of failing at import.
    """
    INTEGRATOR_REL = os.getenv('BVPKIT_INTEGRATOR_REL', '1e-8')
    INTEGRATOR_ABS = os.getenv('BVPKIT_INTEGRATOR_ABS', '1e-10')
    INTEGRATOR_INITIAL_STEP = os.getenv('BVPKIT_INTEGRATOR_INITIAL_STEP', '1e-3')
    INTEGRATOR_MIN_STEP = os.getenv('BVPKIT_INTEGRATOR_MIN_STEP', '1e-14')
    INTEGRATOR_MAX_STEP = os.getenv('BVPKIT_INTEGRATOR_MAX_STEP', '1.0')
    INTEGRATOR_MAX_STEPS = os.getenv('BVPKIT_INTEGRATOR_MAX_STEPS', '100000')

    MATRIX_WORKERS = os.getenv('BVPKIT_MATRIX_WORKERS', '4')
    LOG_LEVEL = os.getenv('BVPKIT_LOG_LEVEL', 'WARNING')


class DevelopmentConfig(Config):
    """Development environment configuration"""
    LOG_LEVEL = os.getenv('BVPKIT_LOG_LEVEL', 'INFO')


class ProductionConfig(Config):
    """Production environment configuration"""


class TestingConfig(Config):
    """Testing environment configuration"""
    INTEGRATOR_REL = '1e-8'
    INTEGRATOR_ABS = '1e-10'
    MATRIX_WORKERS = '2'
    LOG_LEVEL = 'DEBUG'


config_options = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': ProductionConfig
}


def get_config():
    """Get the appropriate configuration based on environment"""
    env = os.getenv('BVPKIT_ENV', 'default')
    return config_options.get(env, ProductionConfig)
