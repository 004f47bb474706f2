"""
配置模块
"""
from .config import *
