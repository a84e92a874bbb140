# Generated by Django 5.2.8 on 2026-10-17 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('degrade', 'Degrade'), ('restore', 'Restore'), ('compare', 'Compare'), ('lasso_demo', 'Lasso demo')], max_length=20)),
                ('status', models.CharField(choices=[('running', 'Running'), ('finished', 'Finished'), ('failed', 'Failed')], default='running', max_length=20)),
                ('algorithms', models.JSONField(blank=True, default=list)),
                ('config', models.JSONField(blank=True, default=dict)),
                ('lipschitz', models.FloatField(blank=True, null=True)),
                ('summary', models.JSONField(blank=True, default=dict)),
                ('error', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'db_table': 'experiment_runs',
                'ordering': ['-created_at', '-id'],
                'indexes': [models.Index(fields=['kind', 'created_at'], name='experiment_kind_created_idx')],
            },
        ),
        migrations.CreateModel(
            name='RunCheckpoint',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('algorithm', models.CharField(max_length=20)),
                ('iteration', models.PositiveIntegerField()),
                ('snr_db', models.FloatField(blank=True, null=True)),
                ('objective', models.FloatField()),
                ('residual_m_norm', models.FloatField()),
                ('elapsed_s', models.FloatField(default=0.0)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='checkpoints', to='restoration.experimentrun')),
            ],
            options={
                'db_table': 'run_checkpoints',
                'ordering': ['run_id', 'iteration', 'id'],
                'constraints': [models.UniqueConstraint(fields=('run', 'algorithm', 'iteration'), name='uniq_checkpoint_per_algorithm')],
            },
        ),
    ]
