class SurveyRecordDao {
  assignRecord(record) {
    return this.recordStore.assign(record);
  }
  displayRecord(record) {
    return this.recordStore.display(record);
  }
  findSurvey(survey) {
    return this.surveyStore.find(survey);
  }
  editSurvey(survey) {
    return this.surveyStore.edit(survey);
  }
}
module.exports = SurveyRecordDao;
