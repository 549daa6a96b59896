public class TransactionReportHelper {
    public void addReport(Report report) {
        reportStore.add(report);
    }
    public void submitTransaction(Transaction transaction) {
        transactionStore.submit(transaction);
    }
}
