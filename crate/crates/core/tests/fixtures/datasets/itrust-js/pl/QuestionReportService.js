class QuestionReportService {
  addReport(report) {
    return this.reportStore.add(report);
  }
  displayReport(report) {
    return this.reportStore.display(report);
  }
  approveReport(report) {
    return this.reportStore.approve(report);
  }
}
module.exports = QuestionReportService;
